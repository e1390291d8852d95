"""Order-k* binary Markov source.

State i is the integer value of the last k* emitted bits, oldest bit most
significant, so the successor state after emitting x is ((i << 1) | x) & mask.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitseq import BitSequence
from .errors import OrderTooLarge

MAX_ORDER = 20
RNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class SourceModel:
    order: int
    transitions: tuple  # p*(1|i) for i = 0 .. 2**order - 1

    def __post_init__(self):
        if not 1 <= self.order <= MAX_ORDER:
            raise OrderTooLarge(f"source order {self.order} outside [1, {MAX_ORDER}]")
        t = tuple(float(x) for x in self.transitions)
        if len(t) != 2 ** self.order:
            raise ValueError(f"need {2 ** self.order} transition probabilities, got {len(t)}")
        if any(not 0.0 <= x <= 1.0 for x in t):
            raise ValueError("transition probabilities must lie in [0, 1]")
        object.__setattr__(self, "transitions", t)

    @property
    def n_states(self) -> int:
        return 2 ** self.order

    @classmethod
    def from_transitions(cls, transitions: Sequence[float]) -> "SourceModel":
        n = len(transitions)
        order = n.bit_length() - 1
        if order < 1 or 2 ** order != n:
            raise ValueError("number of transitions must be a power of two >= 2")
        return cls(order, tuple(transitions))


def make_paper_source(k_star: int, p: float = 0.3) -> SourceModel:
    """Half/half source: states with leading bit 0 emit 1 w.p. 1-p, the rest w.p. p."""
    if not 1 <= k_star <= MAX_ORDER:
        raise OrderTooLarge(f"source order {k_star} outside [1, {MAX_ORDER}]")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    half = 2 ** (k_star - 1)
    return SourceModel(k_star, (1.0 - p,) * half + (p,) * half)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator; PCG64 streams are identical on every platform."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def generate(model: SourceModel, length: int, rng: np.random.Generator,
             burn_in: int = 0, trace: list | None = None) -> BitSequence:
    """Emit ``length`` bits after discarding ``burn_in`` emissions.

    The initial state is uniform over all 2**order states. When ``trace`` is a
    list, the state used at every emission (burn-in included) is appended.
    """
    if length < 0 or burn_in < 0:
        raise ValueError("length and burn_in must be non-negative")
    state = int(rng.integers(0, model.n_states))
    total = burn_in + length
    uniforms = rng.random(total).tolist()
    thresholds = model.transitions
    mask = model.n_states - 1
    out = bytearray(total)
    if trace is None:
        for t, u in enumerate(uniforms):
            x = u < thresholds[state]
            out[t] = x
            state = ((state << 1) | x) & mask
    else:
        for t, u in enumerate(uniforms):
            trace.append(state)
            x = u < thresholds[state]
            out[t] = x
            state = ((state << 1) | x) & mask
    return BitSequence(np.frombuffer(bytes(out[burn_in:]), dtype=np.uint8))
