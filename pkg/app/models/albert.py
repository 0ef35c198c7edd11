"""Coordinates of the 27-dimensional module sum(alpha_i e_i) + sum(u_i[jl]).

Basis order: e1, e2, e3, then the u1, u2 and u3 blocks of eight coordinates.
"""
from typing import Dict, Iterator, List, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError, InvalidScalarError, RingMismatchError
from app.models.composition import RANK
from app.models.quadspace import LinearMap, ScalarLike, Vector
from app.models.scalars import RingDescriptor, RingKind, Scalar

ALBERT_RANK = 3 + 3 * RANK

# (i, j, l) runs over the cyclic permutations of (1, 2, 3)
CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def alpha_index(i: int) -> int:
    return i - 1


def block_offset(i: int) -> int:
    return 3 + RANK * (i - 1)


def block_range(i: int) -> range:
    start = block_offset(i)
    return range(start, start + RANK)


class Gamma:
    """Scaling triple (g1, g2, g3); the product g1 g2 g3 must be a unit."""

    def __init__(self, g1: Scalar, g2: Scalar, g3: Scalar):
        if not g1.ring == g2.ring == g3.ring:
            raise RingMismatchError("gamma entries must share a ring")
        self.values: Tuple[Scalar, Scalar, Scalar] = (g1, g2, g3)

    @classmethod
    def parse(cls, ring: RingDescriptor, text: str) -> "Gamma":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise InvalidScalarError(f"gamma needs three comma separated entries, got {text!r}")
        return cls(*(ring.element(p) for p in parts))

    @classmethod
    def of(cls, ring: RingDescriptor, values: Sequence[ScalarLike]) -> "Gamma":
        if len(values) != 3:
            raise InvalidScalarError("gamma needs three entries")
        return cls(*(ring.element(v) for v in values))

    @classmethod
    def unit(cls, ring: RingDescriptor) -> "Gamma":
        return cls(ring.one(), ring.one(), ring.one())

    @property
    def ring(self) -> RingDescriptor:
        return self.values[0].ring

    def __getitem__(self, i: int) -> Scalar:
        """1-based access: gamma[1] is g1."""
        return self.values[i - 1]

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.values)

    def product(self) -> Scalar:
        g1, g2, g3 = self.values
        return g1 * g2 * g3

    def is_valid(self) -> bool:
        return self.product().is_unit()

    def all_units(self) -> bool:
        return all(g.is_unit() for g in self.values)

    def inverse(self) -> "Gamma":
        return Gamma(*(g.invert() for g in self.values))

    def base_change(self, ring: RingDescriptor) -> "Gamma":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return Gamma.of(ring, [g.value for g in self.values])

    def to_strings(self) -> List[str]:
        return [str(g) for g in self.values]

    def __str__(self):
        return ",".join(self.to_strings())

    def __eq__(self, other):
        if not isinstance(other, Gamma):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(self.values)


class AlbertElement:
    """Structured view alpha_1 e_1 + alpha_2 e_2 + alpha_3 e_3 + u_1[23] + u_2[31] + u_3[12]."""

    def __init__(self, alphas: Sequence[Scalar], u1: Vector, u2: Vector, u3: Vector):
        if len(alphas) != 3 or any(len(u) != RANK for u in (u1, u2, u3)):
            raise DimensionMismatchError("an Albert element has three scalars and three rank-8 vectors")
        self.alphas = tuple(alphas)
        self.blocks = (u1, u2, u3)

    @property
    def ring(self) -> RingDescriptor:
        return self.blocks[0].ring

    def u(self, i: int) -> Vector:
        return self.blocks[i - 1]

    def flatten(self) -> Vector:
        ring = self.ring
        raw = [ring.element(a).value for a in self.alphas]
        for u in self.blocks:
            raw.extend(u.raw)
        return Vector(ring, raw)

    @classmethod
    def unflatten(cls, x: Vector) -> "AlbertElement":
        if len(x) != ALBERT_RANK:
            raise DimensionMismatchError(f"expected {ALBERT_RANK} coordinates, got {len(x)}")
        blocks = [Vector(x.ring, x.raw[block_offset(i):block_offset(i) + RANK]) for i in (1, 2, 3)]
        return cls([x[0], x[1], x[2]], *blocks)

    @classmethod
    def from_parts(cls, ring: RingDescriptor, alphas: Sequence[ScalarLike] = (0, 0, 0), u1=None, u2=None, u3=None) -> "AlbertElement":
        zero = Vector.zero(ring, RANK)
        blocks = [zero if u is None else u for u in (u1, u2, u3)]
        return cls([ring.element(a) for a in alphas], *blocks)

    def structured(self) -> Dict[str, List[str]]:
        return {
            "alphas": [str(a) for a in self.alphas],
            "u1": self.blocks[0].to_strings(),
            "u2": self.blocks[1].to_strings(),
            "u3": self.blocks[2].to_strings(),
        }


def e(ring: RingDescriptor, i: int) -> Vector:
    """The diagonal idempotent e_i."""
    return Vector.basis(ring, ALBERT_RANK, alpha_index(i))


def embed(ring: RingDescriptor, i: int, u: Vector) -> Vector:
    """u placed in the i-th off-diagonal slot, i.e. u_i[jl]."""
    if len(u) != RANK:
        raise DimensionMismatchError("off-diagonal slots hold rank-8 vectors")
    raw = [ring.reduce(0)] * ALBERT_RANK
    raw[block_offset(i):block_offset(i) + RANK] = u.raw
    return Vector(ring, raw)


def restrict(x: Vector, i: int) -> Vector:
    """The u_i block of x."""
    return Vector(x.ring, x.raw[block_offset(i):block_offset(i) + RANK])


class Frame:
    def __init__(self, c1: Vector, c2: Vector, c3: Vector):
        for c in (c1, c2, c3):
            if len(c) != ALBERT_RANK:
                raise DimensionMismatchError(f"frame elements have {ALBERT_RANK} coordinates")
        if not c1.ring == c2.ring == c3.ring:
            raise RingMismatchError("frame elements must share a ring")
        self.elements: Tuple[Vector, Vector, Vector] = (c1, c2, c3)

    @classmethod
    def distinguished(cls, ring: RingDescriptor) -> "Frame":
        return cls(e(ring, 1), e(ring, 2), e(ring, 3))

    @property
    def ring(self) -> RingDescriptor:
        return self.elements[0].ring

    def __getitem__(self, i: int) -> Vector:
        """1-based access: frame[1] is c1."""
        return self.elements[i - 1]

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.elements)

    def image(self, phi: LinearMap) -> "Frame":
        return Frame(*(phi.apply(c) for c in self.elements))

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)
