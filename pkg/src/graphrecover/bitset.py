"""Packed bit-row primitives shared by every module.

A set over {0..n-1} is a C-contiguous uint64 array of ceil(n/64) words;
bit j of word i represents element 64*i + j (little-endian within the
word).  Padding bits above n-1 are always kept zero so popcounts and
equality work wordwise.
"""

from __future__ import annotations

import numpy as np

WORD = 64


def word_count(n: int) -> int:
    return (n + WORD - 1) // WORD


def zeros(n: int) -> np.ndarray:
    return np.zeros(word_count(n), dtype=np.uint64)


def tail_mask(n: int) -> np.ndarray:
    """All-ones mask over {0..n-1}, padding bits clear."""
    m = np.full(word_count(n), ~np.uint64(0), dtype=np.uint64)
    rem = n % WORD
    if m.size and rem:
        m[-1] = (np.uint64(1) << np.uint64(rem)) - np.uint64(1)
    return m


def from_indices(n: int, ids) -> np.ndarray:
    mask = zeros(n)
    ids = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64)
    if ids.size:
        if ids.min() < 0 or ids.max() >= n:
            raise ValueError(f"element out of range for universe of size {n}")
        np.bitwise_or.at(mask, ids // WORD, np.uint64(1) << (ids % WORD).astype(np.uint64))
    return mask


def to_indices(mask: np.ndarray, n: int) -> np.ndarray:
    return np.flatnonzero(unpack(mask, n)).astype(np.int64)


def unpack(mask: np.ndarray, n: int) -> np.ndarray:
    """0/1 uint8 array of length n."""
    return np.unpackbits(mask.view(np.uint8), bitorder="little")[:n]


def pack(bits: np.ndarray) -> np.ndarray:
    """Inverse of unpack; pads to a whole number of words."""
    n = bits.shape[-1]
    packed = np.packbits(bits, axis=-1, bitorder="little")
    out_bytes = word_count(n) * 8
    pad = out_bytes - packed.shape[-1]
    if pad:
        shape = packed.shape[:-1] + (pad,)
        packed = np.concatenate([packed, np.zeros(shape, dtype=np.uint8)], axis=-1)
    return np.ascontiguousarray(packed).view(np.uint64)


def popcount(mask: np.ndarray) -> int:
    return int(np.bitwise_count(mask).sum())


def row_popcounts(rows: np.ndarray) -> np.ndarray:
    """Popcount per row of a 2-D word matrix, as int64."""
    return np.bitwise_count(rows).sum(axis=1, dtype=np.int64)


def get_bit(mask: np.ndarray, i: int) -> bool:
    return bool((mask[i // WORD] >> np.uint64(i % WORD)) & np.uint64(1))


def set_bit(mask: np.ndarray, i: int) -> None:
    mask[i // WORD] |= np.uint64(1) << np.uint64(i % WORD)


def clear_bit(mask: np.ndarray, i: int) -> None:
    mask[i // WORD] &= ~(np.uint64(1) << np.uint64(i % WORD))


def clear_column(rows: np.ndarray, i: int) -> None:
    rows[:, i // WORD] &= ~(np.uint64(1) << np.uint64(i % WORD))


def clear_diagonal(rows: np.ndarray, n: int) -> None:
    idx = np.arange(n)
    rows[idx, idx // WORD] &= ~(np.uint64(1) << (idx % WORD).astype(np.uint64))


_BLOCK = 4096  # multiple of WORD so column ranges stay word-aligned


def transpose(rows: np.ndarray, n: int) -> np.ndarray:
    """Transpose an n x n packed bit matrix, blockwise to bound memory."""
    w = word_count(n)
    out = np.zeros((n, w), dtype=np.uint64)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = np.unpackbits(
            rows[start:stop].view(np.uint8), axis=1, bitorder="little"
        )[:, :n]
        packed = pack(np.ascontiguousarray(block.T))
        out[:, start // WORD : start // WORD + packed.shape[1]] |= packed
    return out
