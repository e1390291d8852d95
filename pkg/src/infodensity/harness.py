"""Run pipeline, parameter sweeps and per-order aggregation."""
from __future__ import annotations

import csv
import hashlib
import io
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .bitseq import SLIDING
from .complexity import EMPTY_LEN, algorithmic_complexity, system_metrics
from .errors import InfoDensityError, NoSuchOrder
from .learner import estimate, predict_and_score, system_bytes
from .randomness import FORWARD, REVERSE, WORD_LENGTH, delta_zero
from .source import MAX_ORDER, SourceModel, generate, make_paper_source, make_rng

PAPER_K_VALUES = tuple(range(1, 11))
PAPER_M_VALUES = tuple(range(100, 10001, 100))
PAPER_RUNS_PER_CELL = 10
PAPER_N = 1000
PAPER_P = 0.3

RUN_CSV_HEADER = ["kStar", "k", "m", "n", "runIndex", "seed", "errorRate", "rho", "ellZero",
                  "deltaZero", "deltaZeroReverse", "xiZeroLength", "sysUncomp", "sysComp"]
AGG_CSV_HEADER = ["k", "runCount", "failedCount", "meanError", "stdError", "meanRho", "stdRho",
                  "meanEllZero", "stdEllZero", "meanDeltaZero", "stdDeltaZero",
                  "deltaDefinedCount", "meanOnesFractionInD"]


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of ints/strings (blake2b, not hash())."""
    h = hashlib.blake2b(digest_size=8, person=b"infodensity")
    for part in parts:
        token = str(part).encode("utf-8")
        h.update(struct.pack("<I", len(token)))
        h.update(token)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RunConfig:
    k_star: int
    k: int
    m: int
    n: int = PAPER_N
    p: float = PAPER_P
    run_index: int = 0
    base_seed: int = 0
    burn_in: int = 0
    transitions: Optional[tuple] = None  # custom chain; overrides (k_star, p)
    word_mode: str = SLIDING
    overhead_correction: bool = False

    def __post_init__(self):
        if self.transitions is not None:
            object.__setattr__(self, "transitions", tuple(float(x) for x in self.transitions))
            object.__setattr__(self, "k_star", len(self.transitions).bit_length() - 1)
        if not 1 <= self.k <= MAX_ORDER:
            raise ValueError(f"k must lie in [1, {MAX_ORDER}], got {self.k}")
        if not 1 <= self.k_star <= MAX_ORDER:
            raise ValueError(f"kStar must lie in [1, {MAX_ORDER}], got {self.k_star}")
        if self.burn_in < 0 or self.run_index < 0:
            raise ValueError("burn_in and run_index must be non-negative")

    def source(self) -> SourceModel:
        if self.transitions is not None:
            return SourceModel.from_transitions(self.transitions)
        return make_paper_source(self.k_star, self.p)

    @property
    def seed(self) -> int:
        return derive_seed(self.base_seed, self.k_star, self.k, self.m, self.run_index)

    def phase_seed(self, phase: str) -> int:
        return derive_seed(self.base_seed, self.k_star, self.k, self.m, self.run_index, phase)


@dataclass
class RunRecord:
    config: RunConfig
    seed: int
    error_rate: float = math.nan
    rho: float = math.nan
    ell_zero: int = 0
    delta_zero: Optional[float] = None
    delta_zero_reverse: Optional[float] = None
    xi_zero_length: int = 0
    sys_uncomp: int = 0
    sys_comp: int = 0
    decisions: str = ""
    failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def ones_in_d(self) -> int:
        return self.decisions.count("1")

    def csv_row(self) -> list:
        c = self.config
        return [c.k_star, c.k, c.m, c.n, c.run_index, self.seed, _fmt(self.error_rate),
                _fmt(self.rho), self.ell_zero if self.ok else "", _fmt(self.delta_zero),
                _fmt(self.delta_zero_reverse), self.xi_zero_length if self.ok else "",
                self.sys_uncomp if self.ok else "", self.sys_comp if self.ok else ""]

    def to_json(self) -> dict:
        c = self.config
        out = {"kStar": c.k_star, "k": c.k, "m": c.m, "n": c.n, "p": c.p, "runIndex": c.run_index,
               "baseSeed": c.base_seed, "burnIn": c.burn_in, "seed": self.seed}
        if self.ok:
            out.update(errorRate=self.error_rate, rho=self.rho, ellZero=self.ell_zero,
                       deltaZero=_json_float(self.delta_zero),
                       deltaZeroReverse=_json_float(self.delta_zero_reverse),
                       xiZeroLength=self.xi_zero_length, sysUncomp=self.sys_uncomp,
                       sysComp=self.sys_comp, decisions=self.decisions)
        else:
            out["failure"] = self.failure
        return out


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def _json_float(x):
    if x is None or math.isinf(x):
        return None if x is None else "inf"
    return x


@dataclass
class RunArtifacts:
    """Everything a run produces, for callers that want the files too."""
    record: RunRecord
    system: bytes = b""
    error_t0: bytes = b""


def run_one_with_artifacts(cfg: RunConfig) -> RunArtifacts:
    record = RunRecord(config=cfg, seed=cfg.seed)
    try:
        source = cfg.source()
        train = generate(source, cfg.m, make_rng(cfg.phase_seed("train")), cfg.burn_in)
        test = generate(source, cfg.n, make_rng(cfg.phase_seed("test")), cfg.burn_in)
        model = estimate(train, cfg.k)
        scored = predict_and_score(model, test)
    except InfoDensityError as exc:
        record.failure = f"{type(exc).__name__}: {exc}"
        return RunArtifacts(record)

    system = system_bytes(model)
    sysm = system_metrics(system)
    xi0 = scored.zero_pred_mistakes
    record.error_rate = scored.error_rate
    record.sys_uncomp = sysm.uncompressed_len
    record.sys_comp = sysm.compressed_len
    num = sysm.compressed_len - (EMPTY_LEN if cfg.overhead_correction else 0)
    record.rho = num / sysm.uncompressed_len
    record.ell_zero = algorithmic_complexity(xi0)
    record.delta_zero = delta_zero(xi0, WORD_LENGTH, cfg.word_mode, FORWARD)
    record.delta_zero_reverse = delta_zero(xi0, WORD_LENGTH, cfg.word_mode, REVERSE)
    record.xi_zero_length = xi0.length
    record.decisions = system.decode("ascii")
    return RunArtifacts(record, system, str(xi0).encode("ascii"))


def run_one(cfg: RunConfig) -> RunRecord:
    return run_one_with_artifacts(cfg).record


@dataclass(frozen=True)
class SweepGrid:
    k_star: int = 3
    p: float = PAPER_P
    k_values: tuple = PAPER_K_VALUES
    m_values: tuple = PAPER_M_VALUES
    runs_per_cell: int = PAPER_RUNS_PER_CELL
    n: int = PAPER_N
    base_seed: int = 0
    burn_in: int = 0
    transitions: Optional[tuple] = None
    word_mode: str = SLIDING
    overhead_correction: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if self.transitions is not None:
            object.__setattr__(self, "transitions", tuple(float(x) for x in self.transitions))
        if not self.k_values or not self.m_values or self.runs_per_cell < 1:
            raise ValueError("sweep grid is empty")

    def configs(self) -> List[RunConfig]:
        return [RunConfig(self.k_star, k, m, self.n, self.p, r, self.base_seed, self.burn_in,
                          self.transitions, self.word_mode, self.overhead_correction)
                for k in self.k_values for m in self.m_values for r in range(self.runs_per_cell)]


def paper_grid(k_star: int, base_seed: int = 0, **overrides) -> SweepGrid:
    return replace(SweepGrid(k_star=k_star, base_seed=base_seed), **overrides)


def sweep(grid: SweepGrid, workers: int = 1) -> List[RunRecord]:
    """Run every (k, m, runIndex) cell; output order never depends on ``workers``."""
    configs = grid.configs()
    if workers <= 1:
        return [run_one(c) for c in configs]
    chunk = max(1, len(configs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, configs, chunksize=chunk))


@dataclass
class AggregateRow:
    k: int
    run_count: int
    failed_count: int
    mean_error: float
    std_error: float
    mean_rho: float
    std_rho: float
    mean_ell_zero: float
    std_ell_zero: float
    mean_delta_zero: float
    std_delta_zero: float
    delta_defined_count: int
    mean_ones_fraction_in_d: float
    m: Optional[int] = None

    def csv_row(self) -> list:
        vals = [self.k, self.run_count, self.failed_count]
        vals += [_fmt(getattr(self, f.name)) for f in fields(self)[3:11]]
        vals += [self.delta_defined_count, _fmt(self.mean_ones_fraction_in_d)]
        return vals if self.m is None else [self.m] + vals


def mean_std(values: Sequence[float]):
    """Mean and sample (ddof=1) standard deviation; std is 0 for one value."""
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return math.nan, math.nan
    # math.fsum keeps the result independent of record order
    mean = math.fsum(a) / a.size
    if a.size == 1:
        return mean, 0.0
    var = math.fsum((a - mean) ** 2) / (a.size - 1)
    return mean, math.sqrt(var)


def _summarize(k, group: List[RunRecord], direction: str, m=None) -> AggregateRow:
    ok = [r for r in group if r.ok]
    key = "delta_zero" if direction == FORWARD else "delta_zero_reverse"
    deltas = [getattr(r, key) for r in ok]
    deltas = [d for d in deltas if d is not None and math.isfinite(d)]
    me, se = mean_std([r.error_rate for r in ok])
    mr, sr = mean_std([r.rho for r in ok])
    ml, sl = mean_std([r.ell_zero for r in ok])
    md, sd = mean_std(deltas)
    d_bits = sum(len(r.decisions) for r in ok)
    ones = sum(r.ones_in_d for r in ok) / d_bits if d_bits else math.nan
    return AggregateRow(k, len(ok), len(group) - len(ok), me, se, mr, sr, ml, sl, md, sd,
                        len(deltas), ones, m)


def aggregate(records: Iterable[RunRecord], direction: str = FORWARD) -> List[AggregateRow]:
    """One row per learner order, pooling over training sizes and repetitions.

    Failed runs are counted but excluded; Delta statistics use defined values only.
    """
    groups = {}
    for r in records:
        groups.setdefault(r.config.k, []).append(r)
    if not groups:
        raise ValueError("no records to aggregate")
    return [_summarize(k, _canonical(groups[k]), direction) for k in sorted(groups)]


def aggregate_by_m(records: Iterable[RunRecord], direction: str = FORWARD) -> List[AggregateRow]:
    groups = {}
    for r in records:
        groups.setdefault((r.config.k, r.config.m), []).append(r)
    return [_summarize(k, _canonical(groups[(k, m)]), direction, m) for k, m in sorted(groups)]


def _canonical(group: List[RunRecord]) -> List[RunRecord]:
    return sorted(group, key=lambda r: (r.config.m, r.config.run_index, r.seed))


def threshold_rho(rows: Sequence[AggregateRow], k_star: int) -> float:
    for row in rows:
        if row.k == k_star and row.m is None:
            return row.mean_rho
    raise NoSuchOrder(f"no aggregate row for k = {k_star}")


def pooled_spread(records: Iterable[RunRecord], ks: Iterable[int], direction: str = FORWARD):
    """Sample std of ell0 and of Delta0 over all successful runs whose k is in ``ks``."""
    ks = set(ks)
    sel = _canonical([r for r in records if r.ok and r.config.k in ks])
    key = "delta_zero" if direction == FORWARD else "delta_zero_reverse"
    deltas = [getattr(r, key) for r in sel]
    deltas = [d for d in deltas if d is not None and math.isfinite(d)]
    return mean_std([r.ell_zero for r in sel])[1], mean_std(deltas)[1]


def state_alpha(records: Iterable[RunRecord], k: int) -> np.ndarray:
    """Per-state fraction of runs whose decision bit is 1 (an estimate of alpha_i)."""
    rows = [np.frombuffer(r.decisions.encode("ascii"), dtype=np.uint8) - ord("0")
            for r in records if r.ok and r.config.k == k]
    if not rows:
        raise NoSuchOrder(f"no successful runs with k = {k}")
    return np.mean(rows, axis=0)


def decision_entropy(alpha: np.ndarray) -> float:
    """Total binary entropy in bits of independent decision bits with the given alphas."""
    a = np.clip(np.asarray(alpha, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(a * np.log2(a) + (1 - a) * np.log2(1 - a))
    return float(np.nansum(h))


def runs_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def aggregates_csv(rows: Iterable[AggregateRow], by_m: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((["m"] if by_m else []) + AGG_CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_row())
    return buf.getvalue()


def read_aggregates_csv(text: str) -> List[dict]:
    return list(csv.DictReader(io.StringIO(text)))
