"""Order-k Markov learner with MAP bit decisions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitseq import BitSequence, BitsLike, as_bits, to_ascii_bytes, word_values
from .errors import TestTooShort, TrainingTooShort


def decide(p_hat: float) -> int:
    # strict inequality: a tie at 1/2 predicts 0
    return 1 if p_hat > 0.5 else 0


@dataclass(frozen=True)
class LearnedModel:
    order: int
    context_counts: np.ndarray
    one_counts: np.ndarray
    estimates: np.ndarray
    decisions: np.ndarray

    @property
    def n_states(self) -> int:
        return 2 ** self.order


@dataclass(frozen=True)
class MistakeRecord:
    mistakes: BitSequence
    zero_pred_mistakes: BitSequence
    prediction_count: int
    error_rate: float


def _context_indices(bits: np.ndarray, k: int) -> np.ndarray:
    # context ending just before position t, for t = k .. len-1 (0-based)
    return word_values(bits[:-1], k)


def estimate(train: BitsLike, k: int) -> LearnedModel:
    """Count context/successor pairs and form p-hat(1|i) and the decision vector.

    Contexts never seen in training get an estimate of exactly 1/2.
    """
    if k < 1:
        raise ValueError("learner order must be at least 1")
    bits = as_bits(train).bits
    if bits.size <= k:
        raise TrainingTooShort(f"training length {bits.size} must exceed order {k}")
    ctx = _context_indices(bits, k)
    succ = bits[k:]
    n_states = 2 ** k
    context_counts = np.bincount(ctx, minlength=n_states).astype(np.int64)
    one_counts = np.bincount(ctx, weights=succ, minlength=n_states).astype(np.int64)
    estimates = np.full(n_states, 0.5)
    seen = context_counts > 0
    estimates[seen] = one_counts[seen] / context_counts[seen]
    decisions = (estimates > 0.5).astype(np.uint8)
    for arr in (context_counts, one_counts, estimates, decisions):
        arr.flags.writeable = False
    return LearnedModel(k, context_counts, one_counts, estimates, decisions)


def predict_and_score(model: LearnedModel, test: BitsLike) -> MistakeRecord:
    """Predict every test bit after the first k and record the mistakes.

    The first k bits only seed the context, so there are len(test) - k predictions.
    """
    k = model.order
    bits = as_bits(test).bits
    if bits.size <= k:
        raise TestTooShort(f"test length {bits.size} must exceed order {k}")
    preds = model.decisions[_context_indices(bits, k)]
    xi = (preds != bits[k:]).astype(np.uint8)
    xi0 = xi[preds == 0]
    count = int(xi.size)
    return MistakeRecord(BitSequence(xi), BitSequence(xi0), count, float(xi.sum()) / count)


def system_bytes(model: LearnedModel) -> bytes:
    """Contents of the system file: the decision vector in state order."""
    return to_ascii_bytes(BitSequence(model.decisions))
