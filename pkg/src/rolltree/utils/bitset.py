"""Packed bitsets over datapoints.

Each binary column (and each class / subset membership vector) is stored as
an array of ``uint64`` words so that rule counting reduces to a bitwise AND
followed by a popcount.
"""

from typing import Sequence

import numpy as np

WORD_BITS = 64

m1 = np.uint64(0x5555555555555555)
m2 = np.uint64(0x3333333333333333)
m4 = np.uint64(0x0F0F0F0F0F0F0F0F)
h01 = np.uint64(0x0101010101010101)


def n_words(n_bits: int) -> int:
    """Number of 64-bit words needed to hold ``n_bits`` bits."""
    return max(1, -(-n_bits // WORD_BITS))


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into 64-bit words.

    Args:
        bits: Array of shape ``(..., n)`` holding 0/1 values.

    Returns:
        np.ndarray: ``uint64`` array of shape ``(..., n_words(n))``. Padding
            bits are zero.
    """
    bits = np.asarray(bits, dtype=bool)
    n = bits.shape[-1]
    padded_len = n_words(n) * WORD_BITS
    if padded_len != n:
        pad = [(0, 0)] * (bits.ndim - 1) + [(0, padded_len - n)]
        bits = np.pad(bits, pad)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


def pack_indices(indices: Sequence[int], n_bits: int) -> np.ndarray:
    """Build a bitset with the given positions set."""
    mask = np.zeros(n_bits, dtype=bool)
    mask[np.asarray(indices, dtype=np.int64)] = True
    return pack_rows(mask)


def full_mask(n_bits: int) -> np.ndarray:
    """Bitset with the first ``n_bits`` positions set."""
    return pack_rows(np.ones(n_bits, dtype=bool))


def popcount(words: np.ndarray) -> int:
    """Count the set bits of a packed bitset.

    SWAR reduction (pairs, nibbles, bytes, then a multiply to sum the bytes).
    """
    arr = np.asarray(words, dtype=np.uint64)
    arr = arr - ((arr >> np.uint64(1)) & m1)
    arr = (arr & m2) + ((arr >> np.uint64(2)) & m2)
    arr = (arr + (arr >> np.uint64(4))) & m4
    arr = (arr * h01) >> np.uint64(56)
    return int(arr.sum())
