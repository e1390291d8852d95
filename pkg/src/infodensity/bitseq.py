"""Binary sequences, their ASCII serialization and word counting."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import EmptySequence

SLIDING = "sliding"
BLOCK = "block"


@dataclass(frozen=True, eq=False)
class BitSequence:
    """Immutable sequence of 0/1 symbols backed by a uint8 array."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits)
        if arr.ndim != 1:
            raise ValueError("bit sequence must be one-dimensional")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("bit sequence may only contain 0 and 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @classmethod
    def from_str(cls, text: str) -> "BitSequence":
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitSequence":
        return cls.from_str(data.decode("ascii"))

    @property
    def length(self) -> int:
        return int(self.bits.size)

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return iter(self.bits.tolist())

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitSequence(self.bits[item])
        return int(self.bits[item])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __str__(self) -> str:
        return to_ascii_bytes(self).decode("ascii")

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 40:
            text = text[:37] + "..."
        return f"BitSequence('{text}', length={self.length})"

    def count_ones(self) -> int:
        return int(self.bits.sum(dtype=np.int64))


BitsLike = Union[BitSequence, str, Iterable[int], np.ndarray]


def as_bits(seq: BitsLike) -> BitSequence:
    if isinstance(seq, BitSequence):
        return seq
    if isinstance(seq, str):
        return BitSequence.from_str(seq)
    return BitSequence(np.fromiter(seq, dtype=np.int64) if not isinstance(seq, np.ndarray) else seq)


def to_ascii_bytes(s: BitsLike) -> bytes:
    """One ASCII byte ('0' or '1') per bit, no separators."""
    return (as_bits(s).bits + ord("0")).tobytes()


@dataclass(frozen=True)
class WordHistogram:
    word_length: int
    counts: np.ndarray  # indexed by word value, first bit most significant

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict:
        L = self.word_length
        return {format(w, f"0{L}b"): int(c) for w, c in enumerate(self.counts)}


def word_values(bits: np.ndarray, L: int, step: int = 1) -> np.ndarray:
    """Integer value of each length-L window starting at 0, step, 2*step, ..."""
    n_words = (bits.size - L) // step + 1 if bits.size >= L else 0
    if n_words <= 0:
        return np.zeros(0, dtype=np.int64)
    vals = np.zeros(n_words, dtype=np.int64)
    stop = step * (n_words - 1) + 1
    for j in range(L):
        vals = (vals << 1) | bits[j:j + stop:step]
    return vals


def count_words(s: BitsLike, L: int = 4, mode: str = SLIDING) -> WordHistogram:
    if L < 1:
        raise ValueError("word length must be at least 1")
    if mode not in (SLIDING, BLOCK):
        raise ValueError(f"unknown word mode {mode!r}")
    bits = as_bits(s).bits
    vals = word_values(bits, L, 1 if mode == SLIDING else L)
    counts = np.bincount(vals, minlength=2 ** L).astype(np.int64)
    return WordHistogram(L, counts)


def frequency_of_ones(s: BitsLike) -> float:
    s = as_bits(s)
    if s.length == 0:
        raise EmptySequence("frequency of ones is undefined for an empty sequence")
    return s.count_ones() / s.length
