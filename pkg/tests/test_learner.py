import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from infodensity.errors import TestTooShort, TrainingTooShort
from infodensity.learner import LearnedModel, decide, estimate, predict_and_score, system_bytes
from infodensity.oracles import brute_force_counts
from infodensity.source import generate, make_paper_source, make_rng


def model_from_decisions(d):
    d = np.array(d, dtype=np.uint8)
    k = d.size.bit_length() - 1
    zeros = np.zeros(d.size, dtype=np.int64)
    return LearnedModel(k, zeros, zeros, d.astype(float), d)


def test_decide():
    assert decide(0.7) == 1
    assert decide(0.3) == 0
    assert decide(0.5) == 0


def test_alternating_training():
    # pairs (0,1) x5 and (1,0) x4: every 0 is followed by 1
    model = estimate("0101010101", 1)
    assert model.context_counts.tolist() == [5, 4]
    assert model.estimates.tolist() == [1.0, 0.0]
    assert model.decisions.tolist() == [1, 0]


def test_unseen_contexts_default_to_half():
    model = estimate("000000", 2)
    assert model.estimates.tolist() == [0.0, 0.5, 0.5, 0.5]
    assert model.decisions.tolist() == [0, 0, 0, 0]


def test_training_too_short():
    with pytest.raises(TrainingTooShort):
        estimate("01", 2)


def test_estimates_near_truth():
    source = make_paper_source(3, 0.3)
    model = estimate(generate(source, 10 ** 4, make_rng(31)), 3)
    for i in range(8):
        v = model.context_counts[i]
        # three binomial sigmas at the realized count, never above 0.04
        assert abs(model.estimates[i] - source.transitions[i]) <= min(0.04, 3 * np.sqrt(0.21 / v))


@pytest.mark.parametrize("length", range(2, 11))
def test_matches_brute_force_counts(length):
    for tup in itertools.product("01", repeat=length):
        s = "".join(tup)
        for k in range(1, min(3, length - 1) + 1):
            model = estimate(s, k)
            want = brute_force_counts(s, k)
            assert model.context_counts.tolist() == [v for v, _ in want]
            assert model.one_counts.tolist() == [o for _, o in want]


@given(st.text("01", min_size=2, max_size=300), st.integers(1, 6))
def test_model_invariants(train, k):
    if len(train) <= k:
        return
    model = estimate(train, k)
    assert int(model.context_counts.sum()) == len(train) - k
    assert np.all(model.one_counts <= model.context_counts)
    for i in range(2 ** k):
        assert model.decisions[i] == decide(model.estimates[i])
    with pytest.raises(ValueError):
        model.decisions[0] = 1


def test_hand_trace():
    # t=2..5 contexts 0,0,1,1 -> predictions 1,1,0,0 against 0,1,1,0
    scored = predict_and_score(model_from_decisions([1, 0]), "00110")
    assert str(scored.mistakes) == "1010"
    assert str(scored.zero_pred_mistakes) == "10"
    assert scored.prediction_count == 4
    assert scored.error_rate == 0.5


def test_perfect_and_total_failure():
    ones = "1" * 20
    perfect = predict_and_score(model_from_decisions([1, 1, 1, 1]), ones)
    assert str(perfect.mistakes) == "0" * 18 and perfect.zero_pred_mistakes.length == 0
    failed = predict_and_score(model_from_decisions([0, 0, 0, 0]), ones)
    assert str(failed.mistakes) == "1" * 18
    assert failed.zero_pred_mistakes == failed.mistakes


def test_test_too_short():
    with pytest.raises(TestTooShort):
        predict_and_score(model_from_decisions([1, 0, 0, 1]), "01")


@given(st.lists(st.integers(0, 1), min_size=8, max_size=8), st.text("01", min_size=4, max_size=200))
def test_mistake_record_invariants(d, test):
    scored = predict_and_score(model_from_decisions(d), test)
    assert scored.prediction_count == scored.mistakes.length == len(test) - 3
    assert scored.zero_pred_mistakes.length <= scored.mistakes.length
    assert scored.error_rate == scored.mistakes.count_ones() / scored.prediction_count


def test_system_bytes():
    assert system_bytes(model_from_decisions([1, 0])) == b"10"
    assert system_bytes(model_from_decisions([0, 0, 0, 0, 1, 1, 1, 1])) == b"00001111"
    assert system_bytes(model_from_decisions([0] * 1024)) == b"0" * 1024


@pytest.mark.parametrize("k", [1, 2])
def test_decisions_fair_below_source_order(k):
    # for k < k* the limiting p(1|i) is exactly 1/2, so d_i ~ Bernoulli(1/2)
    runs = 50
    source = make_paper_source(3, 0.3)
    ones = sum(estimate(generate(source, 10 ** 4, make_rng(1000 + r)), k).decisions.sum()
               for r in range(runs))
    frac = ones / (runs * 2 ** k)
    sigma = 1 / (2 * np.sqrt(runs * 2 ** k))
    assert abs(frac - 0.5) <= 3 * sigma + 0.02
