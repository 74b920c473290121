"""splitmix64-counter v1: a tiny keyed counter-based random stream.

Monte Carlo trials must be reproducible bit-for-bit across platforms and
Python versions, and independent of execution order, so this module fixes
its own generator instead of relying on a library whose streams may change.

Algorithm (all arithmetic modulo 2**64):

    F(z) = splitmix64 finalizer:
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        z = z ^ (z >> 31)

    stream key:   base = F(F(seed) ^ F(trial))
    i-th word:    w_i = F(base + (i + 1) * 0x9E3779B97F4A7C15)
    uniform index in [0, n): consume words while w >= 2**64 - (2**64 % n),
        then return w % n  (rejection keeps the index exactly uniform)

Any change to these constants or steps is a new version and a new name.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def finalize(z: int) -> int:
    """The splitmix64 output mix: a 64-bit bijection with strong avalanche."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class CounterStream:
    """The word stream for one (seed, trial) pair.

    Words are a pure function of (seed, trial, word index), so trials can run
    in any order, or concurrently, without changing a single draw.
    """

    def __init__(self, seed: int, trial: int):
        self._base = finalize(finalize(seed) ^ finalize(trial))
        self._count = 0

    def next_word(self) -> int:
        self._count += 1
        return finalize((self._base + self._count * _GOLDEN) & _MASK)

    def uniform_index(self, n: int) -> int:
        """An exactly uniform index into a pool of size ``n``."""
        if n <= 0:
            raise ValueError(f"pool size must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            word = self.next_word()
            if word < limit:
                return word % n
