"""Bernoulli word model and the KL divergence of a mistake subsequence from it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitseq import SLIDING, BitsLike, WordHistogram, as_bits, count_words, frequency_of_ones
from .errors import InfiniteDivergence, NoWords

WORD_LENGTH = 4
FORWARD = "forward"   # D(empirical || model)
REVERSE = "reverse"   # D(model || empirical)


@dataclass(frozen=True)
class WordDistribution:
    word_length: int
    probs: np.ndarray  # indexed by word value

    def as_dict(self) -> dict:
        L = self.word_length
        return {format(w, f"0{L}b"): float(p) for w, p in enumerate(self.probs)}


def _ones_per_word(L: int) -> np.ndarray:
    words = np.arange(2 ** L)
    return np.array([bin(w).count("1") for w in words], dtype=np.int64)


def bernoulli_word_model(p_ones: float, L: int = WORD_LENGTH) -> WordDistribution:
    if not 0.0 <= p_ones <= 1.0:
        raise ValueError("p_ones must lie in [0, 1]")
    if L < 1:
        raise ValueError("word length must be at least 1")
    ones = _ones_per_word(L)
    # numpy gives 0.0**0 == 1.0, which is the convention we need
    probs = np.power(p_ones, ones) * np.power(1.0 - p_ones, L - ones)
    return WordDistribution(L, probs)


def empirical_distribution(h: WordHistogram) -> WordDistribution:
    total = h.total
    if total == 0:
        raise NoWords("histogram holds no words")
    return WordDistribution(h.word_length, h.counts / total)


def divergence(empirical: WordDistribution, model: WordDistribution) -> float:
    """KL divergence D(empirical || model) in bits; 0 log 0 terms vanish."""
    if empirical.word_length != model.word_length:
        raise ValueError("word lengths differ")
    p, q = empirical.probs, model.probs
    support = p > 0
    if np.any(q[support] <= 0):
        raise InfiniteDivergence("empirical mass on a word the model excludes")
    d = float(np.sum(p[support] * np.log2(p[support] / q[support])))
    return max(d, 0.0)


def delta_zero(xi0: BitsLike, L: int = WORD_LENGTH, mode: str = SLIDING,
               direction: str = FORWARD) -> Optional[float]:
    """Divergence of a sequence's word frequencies from its own Bernoulli model.

    Returns None when the sequence is shorter than one word. The reverse
    direction can be infinite when the empirical distribution misses a word.
    """
    xi0 = as_bits(xi0)
    if xi0.length < L:
        return None
    hist = count_words(xi0, L, mode)
    if hist.total == 0:
        return None
    emp = empirical_distribution(hist)
    model = bernoulli_word_model(frequency_of_ones(xi0), L)
    if direction == FORWARD:
        return divergence(emp, model)
    if direction == REVERSE:
        try:
            return divergence(model, emp)
        except InfiniteDivergence:
            return float("inf")
    raise ValueError(f"unknown direction {direction!r}")
