"""Seeded random generation for the property checks.

Streams run on numpy's PCG64 bit generator seeded through
SeedSequence([seed, crc32(label), index]). Integers are drawn from the raw
64-bit output by rejection sampling, so a stream depends on the PCG64 bit
stream alone and not on numpy's distribution code.
"""
import zlib
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from app.models.quadspace import Vector
from app.models.scalars import Raw, RingDescriptor, RingKind

HEIGHT = 9
U64 = 1 << 64


class SampleStream:
    def __init__(self, seed: int, label: str = "", index: int = 0):
        self.seed = seed
        self.label = label
        self.index = index
        entropy = [seed % U64, zlib.crc32(label.encode("utf-8")), index]
        self._bits = np.random.PCG64(np.random.SeedSequence(entropy))

    def next_u64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("empty range")
        limit = (U64 // n) * n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, items: Sequence):
        return items[self.below(len(items))]

    def sample_indices(self, n: int, k: int) -> List[int]:
        """k distinct indices from range(n), in draw order."""
        pool = list(range(n))
        out = []
        for _ in range(min(k, n)):
            out.append(pool.pop(self.below(len(pool))))
        return out


def random_raw(ring: RingDescriptor, stream: SampleStream) -> Raw:
    if ring.kind is RingKind.PRIME_FIELD:
        return stream.below(ring.modulus)
    if ring.kind is RingKind.INTEGERS:
        return stream.integer(-HEIGHT, HEIGHT)
    return Fraction(stream.integer(-HEIGHT, HEIGHT), stream.integer(1, HEIGHT))


def random_unit_raw(ring: RingDescriptor, stream: SampleStream) -> Raw:
    if ring.kind is RingKind.INTEGERS:
        return stream.choice((1, -1))
    while True:
        v = random_raw(ring, stream)
        if v != 0:
            return v


def random_element(ring: RingDescriptor, rank: int, stream: SampleStream) -> Vector:
    return Vector(ring, (random_raw(ring, stream) for _ in range(rank)))


def random_sparse(ring: RingDescriptor, rank: int, stream: SampleStream, support: int) -> Vector:
    """Vector with at most `support` nonzero coordinates, at random positions."""
    raw = [ring.reduce(0)] * rank
    for i in stream.sample_indices(rank, support):
        raw[i] = ring.reduce(random_unit_raw(ring, stream))
    return Vector(ring, raw)


def random_sl3(ring: RingDescriptor, stream: SampleStream, factors: int = 4) -> List[List[Raw]]:
    """Product of elementary matrices E_ij(t), so the determinant is exactly 1."""
    m = [[ring.reduce(1 if i == j else 0) for j in range(3)] for i in range(3)]
    for _ in range(factors):
        i = stream.below(3)
        j = (i + 1 + stream.below(2)) % 3
        t = random_raw(ring, stream)
        # left multiplication by E_ij(t) adds t * row j to row i
        m[i] = [ring.reduce(a + t * b) for a, b in zip(m[i], m[j])]
    return m
