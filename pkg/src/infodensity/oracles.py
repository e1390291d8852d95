"""Independent brute-force checks of the counting, divergence and compression code.

These deliberately avoid the numpy paths they check: contexts are counted with
string slicing, divergences with a literal loop, and compressed streams are
read back with the stdlib gzip module.
"""
from __future__ import annotations

import gzip
import hashlib
import itertools
import math
from typing import Callable, List, NamedTuple

import numpy as np

from . import complexity
from .learner import estimate, predict_and_score
from .randomness import WordDistribution, divergence


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str


def brute_force_counts(train: str, k: int):
    ctx = {format(i, f"0{k}b"): [0, 0] for i in range(2 ** k)}
    for t in range(k, len(train)):
        c = ctx[train[t - k:t]]
        c[0] += 1
        c[1] += train[t] == "1"
    return [ctx[format(i, f"0{k}b")] for i in range(2 ** k)]


def check_context_counts(max_len: int = 12, max_k: int = 3) -> Check:
    n = 0
    for length in range(2, max_len + 1):
        for tup in itertools.product("01", repeat=length):
            s = "".join(tup)
            for k in range(1, min(max_k, length - 1) + 1):
                model = estimate(s, k)
                expect = brute_force_counts(s, k)
                for i, (v, ones) in enumerate(expect):
                    p_hat = ones / v if v else 0.5
                    if (model.context_counts[i] != v or model.one_counts[i] != ones
                            or model.estimates[i] != p_hat
                            or model.decisions[i] != (1 if p_hat > 0.5 else 0)):
                        return Check("context-counts", False, f"mismatch on train={s} k={k} state={i}")
                n += 1
    return Check("context-counts", True, f"{n} (string, k) pairs match")


def literal_kl(p, q) -> float:
    total = 0.0
    for i in range(16):
        if p[i] > 0:
            total += p[i] * math.log(p[i] / q[i], 2)
    return total


def check_divergence(pairs: int = 1000, seed: int = 20240611) -> Check:
    rng = np.random.Generator(np.random.PCG64(seed))
    worst = 0.0
    for j in range(pairs):
        p = rng.random(16)
        p[rng.random(16) < 0.2] = 0.0  # some empty words
        if p.sum() == 0:
            p[0] = 1.0
        p /= p.sum()
        q = rng.random(16) + 1e-3
        q /= q.sum()
        got = divergence(WordDistribution(4, p), WordDistribution(4, q))
        want = literal_kl(p.tolist(), q.tolist())
        err = abs(got - want)
        worst = max(worst, err)
        if err > 1e-10:
            return Check("kl-literal-sum", False, f"pair {j}: {got!r} vs {want!r}")
    return Check("kl-literal-sum", True, f"{pairs} pairs, max abs error {worst:.2e}")


def check_roundtrip(inputs: int = 1000, seed: int = 7) -> Check:
    rng = np.random.Generator(np.random.PCG64(seed))
    for j in range(inputs):
        size = int(rng.integers(0, 3000))
        if j % 2:
            data = rng.integers(0, 256, size, dtype=np.uint8).tobytes()
        else:
            data = (rng.integers(0, 2, size, dtype=np.uint8) + ord("0")).tobytes()
        blob = complexity.gzip_compress(data)
        if gzip.decompress(blob) != data or complexity.gzip_decompress(blob) != data:
            return Check("gzip-roundtrip", False, f"input {j} (size {size}) did not round-trip")
    return Check("gzip-roundtrip", True, f"{inputs} random inputs round-trip")


def pinned_inputs() -> List[bytes]:
    rng = np.random.Generator(np.random.PCG64(12345))
    return [
        b"",
        b"0" * 1024,
        b"01" * 512,
        b"00001111",
        (rng.integers(0, 2, 1024, dtype=np.uint8) + ord("0")).tobytes(),
    ]


# sha256 of the compressed stream for each entry of pinned_inputs()
PINNED_SHA256 = [
    "104588fdbcb2ab7909ec5685f3383f696c882bb6fb805a3c58089704caab1b77",
    "b5434b79c2cab9c39ca12faefc6d78c1e9e15b54485c9943d6416559b2786a0c",
    "5656f94678526e6d7fb267e2a4262a47c90199db850c8eed8a26573fb8a6200d",
    "fd9b7ca25fe96c036aa09e6adf9f10ef3c673fe459bfce5a53e42d67c962f0de",
    "267d0b850f2f8f323d926f4b63f09118a67e5b026b33e0e9a0494d2f1d1a5a4d",
]


def check_pinned_hashes() -> Check:
    for i, (data, want) in enumerate(zip(pinned_inputs(), PINNED_SHA256)):
        got = hashlib.sha256(complexity.gzip_compress(data)).hexdigest()
        if got != want:
            return Check("gzip-pinned-hashes", False, f"input {i}: {got} != {want}")
    return Check("gzip-pinned-hashes", True, f"{len(PINNED_SHA256)} pinned streams match")


def check_hand_traces() -> Check:
    model = estimate("0101010101", 1)
    if model.estimates.tolist() != [1.0, 0.0] or model.decisions.tolist() != [1, 0]:
        return Check("hand-traces", False, "estimate on 0101010101, k=1")
    scored = predict_and_score(model, "00110")
    if str(scored.mistakes) != "1010" or str(scored.zero_pred_mistakes) != "10":
        return Check("hand-traces", False,
                     f"d=[1,0] on 00110 gave xi={scored.mistakes} xi0={scored.zero_pred_mistakes}")
    return Check("hand-traces", True, "estimate and predict_and_score hand traces match")


ALL_CHECKS: List[Callable[[], Check]] = [
    check_context_counts,
    check_divergence,
    check_roundtrip,
    check_pinned_hashes,
    check_hand_traces,
]


def run_all() -> List[Check]:
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crash is a failed check, not an abort
            name = check.__name__.removeprefix("check_").replace("_", "-")
            results.append(Check(name, False, f"raised {type(exc).__name__}: {exc}"))
    return results
