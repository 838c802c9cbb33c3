"""Deterministic pseudo-random generator used everywhere randomness is needed.

The generator is SplitMix64: a 64-bit counter advanced by a fixed odd
increment (the golden gamma), with each output produced by a finalizing
mix of the counter.  It is tiny, fast, platform independent, and the
whole stream is reproducible from a single integer seed, which is what
the tie-breaking and synthetic-pair code rely on.

Constants (all arithmetic is modulo 2**64):

    GAMMA = 0x9E3779B97F4A7C15
    M1    = 0xBF58476D1CE4E5B9
    M2    = 0x94D049BB133111EB

    next(): state += GAMMA
            z = state
            z = (z ^ (z >> 30)) * M1
            z = (z ^ (z >> 27)) * M2
            return z ^ (z >> 31)

Bounded draws use Lemire's multiply-shift with a rejection step, so
``randbelow`` is exactly uniform.  ``block`` produces the same stream as
repeated ``next`` calls but vectorized with numpy for hot loops.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
M1 = 0xBF58476D1CE4E5B9
M2 = 0x94D049BB133111EB

# odd constant used only for folding stream indices into derived seeds
_FOLD = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    """The SplitMix64 output mix of a single 64-bit value."""
    z &= MASK
    z = ((z ^ (z >> 30)) * M1) & MASK
    z = ((z ^ (z >> 27)) * M2) & MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Derive a child seed from a master seed and a path of indices.

    Used to give every (pair index, ranking side, ...) its own
    independent stream while keeping everything reproducible from one
    master seed.
    """
    s = seed & MASK
    for k in path:
        s = (s + GAMMA) & MASK
        s = mix64(s ^ ((k & MASK) * _FOLD & MASK))
    return s


class SplitMix64:
    """Stateful stream over the SplitMix64 sequence for ``seed``."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        s = (self.state + GAMMA) & MASK
        self.state = s
        z = ((s ^ (s >> 30)) * M1) & MASK
        z = ((z ^ (z >> 27)) * M2) & MASK
        return z ^ (z >> 31)

    def block(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as a uint64 array.

        Produces exactly the same values as ``count`` calls of
        ``next_u64`` and leaves the state as if they had been made.
        """
        ks = (self.state + GAMMA * np.arange(1, count + 1, dtype=np.uint64)).astype(
            np.uint64
        )
        z = ks
        z = (z ^ (z >> np.uint64(30))) * np.uint64(M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(M2)
        z = z ^ (z >> np.uint64(31))
        self.state = (self.state + GAMMA * count) & MASK
        return z

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def randbelow(self, n: int) -> int:
        """Exactly uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        x = self.next_u64()
        m = x * n
        low = m & MASK
        if low < n:
            threshold = (MASK + 1 - n) % n
            while low < threshold:
                x = self.next_u64()
                m = x * n
                low = m & MASK
        return m >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.randbelow(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
