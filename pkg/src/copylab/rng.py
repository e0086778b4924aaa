"""Deterministic seeding and chunked Bernoulli sampling.

All Monte Carlo code in the package draws randomness through this module so
that results are reproducible and independent of worker scheduling.  The
sharding contract is chunk-based: trials are grouped into fixed-size chunks
(CHUNK_TRIALS), chunk c of a stream gets the seed
``derive_seed(base, label, c)``, and merging is order-independent.  Any
worker count therefore produces identical numbers.

Bernoulli(p) draws use exact rational probabilities: a uniform integer in
[0, den) is compared against num, so p = num/den is hit exactly (including
the endpoints 0 and 1).
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

import numpy as np

MASK64 = (1 << 64) - 1

#: Trials per RNG chunk.  Fixed: changing it changes every sampled stream.
CHUNK_TRIALS = 4096


def splitmix64(x: int) -> int:
    """One round of the splitmix64 mixing function (a 64-bit bijection)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _label_hash(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest(), "little")


def derive_seed(base: int, label: str, trial: int) -> int:
    """Derive a 64-bit stream seed from (base seed, stream label, trial index).

    The mix is ``splitmix64(splitmix64(base XOR blake2b64(label)) + trial)``.
    For a fixed (base, label) the map trial -> seed is a bijection on 64-bit
    integers, so consecutive trials can never collide; distinct labels
    re-key the whole stream.
    """
    s = splitmix64((base ^ _label_hash(label)) & MASK64)
    return splitmix64((s + trial) & MASK64)


def generator(seed: int) -> np.random.Generator:
    """Counter-based generator for a derived seed (stable across platforms)."""
    return np.random.Generator(np.random.Philox(key=seed & MASK64))


def bernoulli_matrix(seed: int, rows: int, cols: int, p: Fraction) -> np.ndarray:
    """rows x cols boolean matrix of independent Bernoulli(p) draws.

    Exact: each entry is True with probability exactly num/den.
    """
    num, den = p.numerator, p.denominator
    if num == 0:
        return np.zeros((rows, cols), dtype=bool)
    if num == den:
        return np.ones((rows, cols), dtype=bool)
    rng = generator(seed)
    draws = rng.integers(0, den, size=(rows, cols), dtype=np.int64)
    return draws < num


def bernoulli_row(seed: int, n: int, p: Fraction) -> np.ndarray:
    """Length-n boolean vector of Bernoulli(p) draws (single-row chunk)."""
    return bernoulli_matrix(seed, 1, n, p)[0]


def bits_to_int(bits: np.ndarray) -> int:
    """Pack a boolean vector into a Python int bitset (bit i = bits[i])."""
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def chunk_count(trials: int) -> int:
    return (trials + CHUNK_TRIALS - 1) // CHUNK_TRIALS


def chunk_bounds(chunk: int, trials: int) -> tuple[int, int]:
    """Trial index range [lo, hi) covered by a chunk."""
    lo = chunk * CHUNK_TRIALS
    return lo, min(lo + CHUNK_TRIALS, trials)
