"""Bit-mask helpers shared by the matrix, enumeration and decoding code.

Sets of columns are Python ints with bit ``j - 1`` standing for column ``j``.
Array kernels work on ``numpy.uint64`` masks.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator

import numpy as np

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_TWO = np.uint64(2)
_FOUR = np.uint64(4)
_TOP_BYTE = np.uint64(56)


def _swar_popcount(arr: np.ndarray) -> np.ndarray:
    arr = arr - ((arr >> _ONE) & _M1)
    arr = (arr & _M2) + ((arr >> _TWO) & _M2)
    arr = (arr + (arr >> _FOUR)) & _M4
    return (arr * _H01) >> _TOP_BYTE


def popcount64(arr: np.ndarray) -> np.ndarray:
    """Per-element set-bit count of a uint64 array."""
    arr = np.asarray(arr, dtype=np.uint64)
    native = getattr(np, "bitwise_count", None)  # numpy >= 2.0
    if native is not None:
        return native(arr).astype(np.uint64)
    return _swar_popcount(arr)


def make_mask(indexes: Iterable[int]) -> int:
    """Mask of 1-based column indexes."""
    value = 0
    for idx in indexes:
        value |= 1 << (idx - 1)
    return value


def iter_indexes(value: int) -> Iterator[int]:
    """1-based positions of the set bits of ``value``, ascending."""
    index = 1
    while value:
        if value & 1:
            yield index
        value >>= 1
        index += 1


def is_single_bit(value: int) -> bool:
    return value != 0 and value & (value - 1) == 0


def pack_rows(bits: np.ndarray) -> list[int]:
    """Turn each boolean row of a 2-D array into an int mask (column 0 -> bit 0)."""
    packed = np.packbits(np.asarray(bits, dtype=bool), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
