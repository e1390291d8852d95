import math
import random

import numpy as np
import pytest

from infodensity.errors import NoSuchOrder
from infodensity.harness import (AGG_CSV_HEADER, RUN_CSV_HEADER, AggregateRow, RunConfig,
                                 SweepGrid, aggregate, aggregate_by_m, aggregates_csv,
                                 decision_entropy, derive_seed, paper_grid, pooled_spread, run_one,
                                 run_one_with_artifacts, runs_csv, state_alpha, sweep,
                                 threshold_rho)
from infodensity.source import generate, make_rng

SMALL = dict(k_values=(1, 2, 3, 4), m_values=(200, 1000), runs_per_cell=3, n=400)


@pytest.fixture(scope="module")
def small_records():
    return sweep(paper_grid(3, base_seed=5, **SMALL))


def test_seed_is_stable():
    assert derive_seed(1, 3, 3, 100, 0) == derive_seed(1, 3, 3, 100, 0)
    assert derive_seed(1, 3, 3, 100, 0) != derive_seed(1, 3, 3, 100, 1)
    assert derive_seed(1, 31) != derive_seed(13, 1)
    assert derive_seed(0) == 0x63396749A020D719


def test_run_near_bayes_error():
    rec = run_one(RunConfig(3, 3, 10000, 1000, 0.3, base_seed=7))
    assert 0.28 <= rec.error_rate <= 0.38


def test_run_below_source_order_is_coin_flip():
    rec = run_one(RunConfig(3, 1, 10000, 1000, 0.3, base_seed=7))
    assert 0.45 <= rec.error_rate <= 0.55


def test_run_is_deterministic():
    cfg = RunConfig(4, 5, 3000, 1000, 0.3, run_index=2, base_seed=99)
    assert run_one(cfg).to_json() == run_one(cfg).to_json()


def test_record_invariants():
    art = run_one_with_artifacts(RunConfig(3, 6, 2000, 500, base_seed=3))
    rec = art.record
    assert rec.rho == rec.sys_comp / rec.sys_uncomp
    assert rec.sys_uncomp == 64 and len(art.system) == 64
    assert rec.xi_zero_length == len(art.error_t0) <= 500 - 6


def test_overhead_correction():
    cfg = RunConfig(3, 2, 1000, 200, base_seed=1)
    raw = run_one(cfg)
    corrected = run_one(RunConfig(3, 2, 1000, 200, base_seed=1, overhead_correction=True))
    assert corrected.rho == pytest.approx(raw.rho - 20 / 4)


def test_seed_isolation():
    base = RunConfig(3, 3, 500, 300, base_seed=4)
    other_run = RunConfig(3, 3, 500, 300, run_index=1, base_seed=4)
    other_n = RunConfig(3, 3, 500, 900, base_seed=4)
    train = lambda c: generate(c.source(), c.m, make_rng(c.phase_seed("train")))
    test = lambda c: generate(c.source(), c.n, make_rng(c.phase_seed("test")))
    assert train(base) != train(other_run)
    assert test(base) != test(other_run)
    assert train(base) == train(other_n)
    assert train(base) != test(base)


def test_failed_run_is_recorded():
    rec = run_one(RunConfig(3, 5, 5, 100))
    assert not rec.ok and rec.failure.startswith("TrainingTooShort")
    rows = aggregate([rec, run_one(RunConfig(3, 5, 500, 100))])
    assert rows[0].run_count == 1 and rows[0].failed_count == 1


def test_custom_transitions():
    rec = run_one(RunConfig(1, 1, 500, 200, transitions=(1.0, 1.0)))
    assert rec.config.k_star == 1
    assert rec.error_rate == 0.0 and rec.xi_zero_length == 0


def test_singleton_grid():
    recs = sweep(SweepGrid(k_star=3, k_values=(1,), m_values=(100,), runs_per_cell=1))
    assert len(recs) == 1


def test_paper_grid_size():
    assert len(paper_grid(3).configs()) == 10000


def test_sweep_order_and_determinism(small_records):
    keys = [(r.config.k, r.config.m, r.config.run_index) for r in small_records]
    assert keys == sorted(keys) and len(keys) == 4 * 2 * 3
    again = sweep(paper_grid(3, base_seed=5, **SMALL))
    assert runs_csv(again) == runs_csv(small_records)


def test_parallel_matches_serial(small_records):
    parallel = sweep(paper_grid(3, base_seed=5, **SMALL), workers=3)
    assert runs_csv(parallel) == runs_csv(small_records)


def test_aggregate_is_permutation_invariant(small_records):
    shuffled = list(small_records)
    random.Random(0).shuffle(shuffled)
    assert aggregates_csv(aggregate(shuffled)) == aggregates_csv(aggregate(small_records))


def test_aggregate_statistics(small_records):
    rows = aggregate(small_records)
    assert [r.k for r in rows] == [1, 2, 3, 4]
    for row in rows:
        group = [r for r in small_records if r.config.k == row.k]
        assert row.run_count == 6
        assert row.mean_rho == pytest.approx(np.mean([r.rho for r in group]))
        assert row.std_ell_zero == pytest.approx(np.std([r.ell_zero for r in group], ddof=1))
        deltas = [r.delta_zero for r in group if r.delta_zero is not None]
        assert row.delta_defined_count == len(deltas) <= row.run_count
        assert row.std_delta_zero >= 0
        d_bits = "".join(r.decisions for r in group)
        assert row.mean_ones_fraction_in_d == d_bits.count("1") / len(d_bits)
    by_m = aggregate_by_m(small_records)
    assert [(r.k, r.m) for r in by_m] == [(k, m) for k in (1, 2, 3, 4) for m in (200, 1000)]


def test_threshold_rho(small_records):
    rows = aggregate(small_records)
    assert threshold_rho(rows, 3) == rows[2].mean_rho
    with pytest.raises(NoSuchOrder):
        threshold_rho(rows, 7)


def test_pooled_spread_and_alpha(small_records):
    ell_std, delta_std = pooled_spread(small_records, [1, 2])
    assert ell_std > 0 and delta_std > 0
    alpha = state_alpha(small_records, 2)
    assert alpha.shape == (4,) and np.all((alpha >= 0) & (alpha <= 1))
    with pytest.raises(NoSuchOrder):
        state_alpha(small_records, 9)


def test_decision_entropy():
    assert decision_entropy(np.full(8, 0.5)) == pytest.approx(8.0)
    assert decision_entropy(np.array([0.0, 1.0])) == 0.0


def test_csv_formats(small_records):
    text = runs_csv(small_records[:2])
    assert text.splitlines()[0] == ",".join(RUN_CSV_HEADER)
    assert len(text.splitlines()) == 3
    agg = aggregates_csv(aggregate(small_records))
    assert agg.splitlines()[0] == ",".join(AGG_CSV_HEADER)
    rec = run_one(RunConfig(3, 1, 500, 6, base_seed=0, transitions=(1.0, 1.0)))
    assert rec.delta_zero is None
    row = rec.csv_row()
    assert row[RUN_CSV_HEADER.index("deltaZero")] == ""


def test_entropy_diagnostic_below_source_order():
    recs = sweep(paper_grid(4, base_seed=2, k_values=(1, 2, 3)))
    for row in aggregate(recs):
        assert 0.43 <= row.mean_ones_fraction_in_d <= 0.52


@pytest.fixture(scope="module")
def full_m_records():
    return sweep(paper_grid(3, base_seed=1, m_values=(10000,)))


@pytest.mark.parametrize("k", [
    3, 4, 5, 6, 7, 8, 9,
    # ~10 training visits per state: unseen/tied contexts pull d towards 0
    pytest.param(10, marks=pytest.mark.xfail(strict=True, reason="too few visits per state at m=1e4")),
])
def test_entropy_diagnostic_at_or_above_source_order(full_m_records, k):
    row = [r for r in aggregate(full_m_records) if r.k == k][0]
    alpha = state_alpha(full_m_records, k)
    uncertain = np.mean((alpha > 0.2) & (alpha < 0.8))
    assert abs(row.mean_ones_fraction_in_d - 0.5) <= 0.05
    assert uncertain < 0.2
