import gzip
import hashlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infodensity.bitseq import BitSequence
from infodensity.complexity import (EMPTY_LEN, algorithmic_complexity, compress_len,
                                    gzip_compress, gzip_decompress, sys_ratio)
from infodensity.errors import EmptySystem
from infodensity.source import make_rng


def random_chars(n, seed, q=0.5):
    return ((make_rng(seed).random(n) < q).astype(np.uint8) + ord("0")).tobytes()


def test_empty_container_length():
    # 10-byte header + 2-byte empty deflate block + 8-byte trailer
    assert EMPTY_LEN == 20
    assert compress_len(b"") == 20


def test_header_is_zeroed():
    blob = gzip_compress(b"0101")
    assert blob[:10] == b"\x1f\x8b\x08\x00\x00\x00\x00\x00\x02\x00"


def test_compress_len_examples():
    assert compress_len(b"0" * 1024) < 40
    # 1024 fair bits carry 128 bytes of entropy
    assert 130 <= compress_len(random_chars(1024, 1)) <= 240


def test_sys_ratio_examples():
    assert sys_ratio(b"0" * 1024) < 0.04
    assert sys_ratio(b"10") > 1
    assert sys_ratio(b"10") == 11.0
    assert 0.127 <= sys_ratio(random_chars(1024, 1)) <= 0.235
    assert sys_ratio(b"10", overhead_correction=True) == 1.0
    with pytest.raises(EmptySystem):
        sys_ratio(b"")


def test_algorithmic_complexity_examples():
    assert algorithmic_complexity("") == EMPTY_LEN
    zeros = algorithmic_complexity("0" * 500)
    assert zeros < 35
    rng = make_rng(8)
    biased = algorithmic_complexity(BitSequence((rng.random(500) < 0.3).astype(np.uint8)))
    fair = algorithmic_complexity(BitSequence((rng.random(500) < 0.5).astype(np.uint8)))
    assert zeros < biased < fair


def test_entropy_ordering():
    constant = compress_len(b"0" * 1024)
    periodic = compress_len(b"01" * 512)
    sparse = compress_len(random_chars(1024, 5, q=0.1))
    fair = compress_len(random_chars(1024, 5))
    assert constant < periodic < sparse < fair


def test_incompressible_floor():
    rng = make_rng(6)
    for n in (4096, 10000):
        data = rng.integers(0, 256, n, dtype=np.uint8).tobytes()
        assert compress_len(data) >= 0.98 * n


def test_deterministic_bytes():
    data = random_chars(3000, 9)
    digests = {hashlib.sha256(gzip_compress(data)).hexdigest() for _ in range(5)}
    assert len(digests) == 1


@settings(max_examples=200)
@given(st.binary(max_size=5000))
def test_roundtrip(data):
    blob = gzip_compress(data)
    assert gzip.decompress(blob) == data
    assert gzip_decompress(blob) == data
