"""Deterministic gzip compression, sysRatio and compressed-length complexity.

The stream is a standard gzip member: a 10-byte header with the timestamp,
flags and OS byte zeroed, a raw DEFLATE body at level 9, then CRC32 and the
input size. Any gzip tool can read it back.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

from .bitseq import BitsLike, to_ascii_bytes
from .errors import EmptySystem

LEVEL = 9
# magic, CM=deflate, FLG=0, MTIME=0, XFL=2 (max compression), OS=0
_HEADER = b"\x1f\x8b\x08\x00\x00\x00\x00\x00\x02\x00"


def gzip_compress(data: bytes) -> bytes:
    deflater = zlib.compressobj(LEVEL, zlib.DEFLATED, -zlib.MAX_WBITS, 9, zlib.Z_DEFAULT_STRATEGY)
    body = deflater.compress(data) + deflater.flush()
    trailer = struct.pack("<II", zlib.crc32(data) & 0xFFFFFFFF, len(data) & 0xFFFFFFFF)
    return _HEADER + body + trailer


def gzip_decompress(blob: bytes) -> bytes:
    return zlib.decompress(blob, 16 + zlib.MAX_WBITS)


def compress_len(data: bytes) -> int:
    return len(gzip_compress(data))


# length of the container around an empty input
EMPTY_LEN = compress_len(b"")


@dataclass(frozen=True)
class ComplexityMetrics:
    uncompressed_len: int
    compressed_len: int

    @property
    def ratio(self) -> float:
        return self.compressed_len / self.uncompressed_len


def system_metrics(system: bytes) -> ComplexityMetrics:
    if not system:
        raise EmptySystem("system file is empty")
    return ComplexityMetrics(len(system), compress_len(system))


def sys_ratio(system: bytes, overhead_correction: bool = False) -> float:
    """Compressed over uncompressed length of the system file.

    With ``overhead_correction`` the empty-input container length is removed
    from the numerator first.
    """
    m = system_metrics(system)
    num = m.compressed_len - (EMPTY_LEN if overhead_correction else 0)
    return num / m.uncompressed_len


def algorithmic_complexity(seq: BitsLike) -> int:
    return compress_len(to_ascii_bytes(seq))
