"""Seeded 64-bit hashing used by every sketch in the package.

All randomness used by sketches is derived from a 64-bit avalanche mixer
(the splitmix64 finalizer) applied to ``seed + key * GOLDEN``.  The same
function is provided in scalar form and as a numpy kernel so statistical
tests can batch-evaluate it; the two paths agree bit for bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(seed: int, key: int) -> int:
    """Return a 64-bit hash of ``key`` under ``seed``."""
    x = (seed + key * GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def mix64_array(seed: int, keys: np.ndarray) -> np.ndarray:
    """Vectorised ``mix64``; ``keys`` is any integer array."""
    x = np.uint64(seed) + keys.astype(np.uint64) * np.uint64(GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def mix64_rows(seeds: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """``mix64`` across a seed column and a key row: out[i, j] =
    mix64(seeds[i], keys[j]).  Lets statistical suites hash one support
    under many column seeds in a single call."""
    x = (seeds.astype(np.uint64)[:, None]
         + keys.astype(np.uint64)[None, :] * np.uint64(GOLDEN))
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def derive_seed(master: int, purpose: int) -> int:
    """Derive an independent 64-bit stream seed from a master seed."""
    return mix64(master, purpose)


def trailing_zeros(value: int, width: int) -> int:
    """Count trailing zero bits of ``value`` within ``width`` bits.

    A value of zero has all ``width`` low bits clear and counts as ``width``.
    """
    value &= (1 << width) - 1
    if value == 0:
        return width
    return (value & -value).bit_length() - 1


def random_depth(seed: int, key: int, rho: int) -> int:
    """Geometric bucket index for ``key``: trailing zeros of a ``rho``-bit
    hash, capped at ``rho - 1`` so the index always fits the column."""
    return min(trailing_zeros(mix64(seed, key), rho), rho - 1)


def _depths_from_hashes(h: np.ndarray, rho: int) -> np.ndarray:
    h = h & np.uint64((1 << rho) - 1)
    low = h & (np.uint64(0) - h)  # isolates lowest set bit, 0 stays 0
    # low is either 0 or a power of two <= 2**63, both exact in float64
    safe = np.maximum(low, np.uint64(1)).astype(np.float64)
    tz = np.where(low == 0, rho, np.log2(safe).astype(np.int64))
    return np.minimum(tz, rho - 1)


def random_depth_array(seed: int, keys: np.ndarray, rho: int) -> np.ndarray:
    """Vectorised ``random_depth``; exact match with the scalar path."""
    return _depths_from_hashes(mix64_array(seed, keys), rho)


def random_depth_rows(seeds: np.ndarray, keys: np.ndarray, rho: int) -> np.ndarray:
    """``random_depth`` for every (seed, key) pair, shape (len(seeds), len(keys))."""
    return _depths_from_hashes(mix64_rows(seeds, keys), rho)
