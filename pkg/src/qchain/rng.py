"""Deterministic pseudo-randomness for test suites and CLI trials.

The generator is SplitMix64 (Steele, Lea, Flood 2014), implemented here
directly so that streams are bit-identical across platforms and Python
versions. Every randomized routine in this package takes an explicit
seed and derives all choices from this generator only.
"""
from __future__ import annotations

from typing import List

from .fields import Field
from .linalg import Mat, identity, rank

_MASK = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator; next_u64 is the raw stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (n >= 1)."""
        assert n >= 1
        if n == 1:
            return 0
        limit = _MASK - (_MASK % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def fork(self) -> "SplitMix64":
        """An independent child stream (derived from the parent stream)."""
        return SplitMix64(self.next_u64())


# ---------------------------------------------------------------------------
# random exact-arithmetic objects
# ---------------------------------------------------------------------------

def rand_elem(rng: SplitMix64, field: Field):
    if field.is_rational:
        # small numerators/denominators keep Fraction growth in check
        num = rng.randint(-3, 3)
        den = rng.randint(1, 3)
        from fractions import Fraction

        return Fraction(num, den)
    return rng.below(field.char)


def rand_mat(rng: SplitMix64, field: Field, rows: int, cols: int) -> Mat:
    return [[rand_elem(rng, field) for _ in range(cols)] for _ in range(rows)]


def rand_invertible(rng: SplitMix64, field: Field, n: int) -> Mat:
    """Random invertible matrix by rejection; deterministic given the stream."""
    if n == 0:
        return []
    while True:
        m = rand_mat(rng, field, n, n)
        if rank(field, m) == n:
            return m


def rand_unitriangular(rng: SplitMix64, field: Field, n: int) -> Mat:
    """Random upper unitriangular matrix (always invertible)."""
    m = identity(field, n)
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = rand_elem(rng, field)
    return m
