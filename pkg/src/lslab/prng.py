"""Counter-based deterministic random numbers.

The generator is SplitMix64 run in counter mode: draw number i of a stream
with key ``s`` is ``mix64((s + i * GAMMA) mod 2**64)`` where ``mix64`` is the
SplitMix64 finalizer.  Every draw is a pure function of (key, position), so
the whole stream can be produced scalar-by-scalar or as a vectorized block
with bit-identical results, and per-trial substreams are derived from indices
without sharing any state.  The algorithm and reference test vectors are
documented in docs/PRNG.md and pinned by the test suite.

Gaussian variates use Box-Muller on consecutive uniform pairs; there is no
rejection loop, so the number of raw draws consumed is a fixed function of
the request size.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15  # Weyl increment for the output counter
STREAM_GAMMA = 0xD1B54A32D192ED03  # Weyl increment for substream derivation

ALGORITHM_ID = "splitmix64-counter-v1"

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer (pure Python reference)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_block(z: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 finalizer on a uint64 array."""
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def derive_key(seed: int, *indices: int) -> int:
    """Fold substream indices into a seed, one mix per index."""
    key = seed & MASK64
    for ix in indices:
        key = mix64((key + ((ix + 1) * STREAM_GAMMA)) & MASK64)
    return key


class Prng:
    """Deterministic stream of 64-bit words with derivable substreams.

    Parameters
    ----------
    seed : int
        Stream key; only the low 64 bits are used.

    Notes
    -----
    ``substream(i)`` depends only on the key and ``i``, never on how much of
    the parent stream has been consumed, which is what makes per-trial
    parallelism order-independent.
    """

    def __init__(self, seed: int):
        self.key = seed & MASK64
        self.position = 0

    def substream(self, index: int) -> "Prng":
        """Independent stream for trial/cell ``index`` (position not shared)."""
        return Prng(derive_key(self.key, index))

    def next_u64(self) -> int:
        self.position += 1
        return mix64((self.key + self.position * GAMMA) & MASK64)

    def u64_block(self, n: int) -> np.ndarray:
        """Next ``n`` raw draws as a uint64 array (same stream as next_u64)."""
        if n < 0:
            raise ValueError("n must be >= 0")
        counters = np.arange(self.position + 1, self.position + n + 1, dtype=np.uint64)
        self.position += n
        z = np.uint64(self.key) + counters * np.uint64(GAMMA)
        return _mix64_block(z)

    def uniform(self) -> float:
        """One double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_block(self, n: int) -> np.ndarray:
        return (self.u64_block(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection on the top range."""
        if n <= 0:
            raise ValueError("n must be >= 1")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def normal_block(self, n: int) -> np.ndarray:
        """``n`` standard normals by Box-Muller on pairs.

        Consumes exactly ``2 * ceil(n/2)`` raw draws regardless of values.
        """
        pairs = (n + 1) // 2
        u = self.uniform_block(2 * pairs)
        u1 = 1.0 - u[0::2]  # in (0, 1], safe for log; consecutive draws pair up
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * math.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def normal_matrix(self, rows: int, cols: int) -> np.ndarray:
        """Row-major matrix of standard normals."""
        return self.normal_block(rows * cols).reshape(rows, cols)

    def uniform_matrix(self, rows: int, cols: int) -> np.ndarray:
        return self.uniform_block(rows * cols).reshape(rows, cols)

    def subset(self, n: int, k: int) -> list[int]:
        """Uniform k-subset of range(n), returned sorted."""
        if not 0 <= k <= n:
            raise ValueError("k must be in [0, n]")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])

    def shuffled(self, items: list) -> list:
        """Fisher-Yates shuffled copy of ``items``."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out
