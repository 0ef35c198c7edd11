"""Rank-8 composition algebras, compositions of quadratic forms and triples of maps."""
import enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError, RingMismatchError
from app.models.quadspace import LinearMap, QuadraticSpace, Vector
from app.models.scalars import Raw, RingDescriptor, RingKind

RANK = 8


class AlgebraKind(str, enum.Enum):
    OCTONION = "octonion"
    PARA = "para"
    GENERAL = "general"


class BilinearMap:
    """Bilinear map on the standard basis: b_i * b_j = sum_k table[(i, j)][k] b_k."""

    def __init__(self, ring: RingDescriptor, rank: int, table: Dict[Tuple[int, int], Sequence[Tuple[int, Raw]]]):
        self.ring = ring
        self.rank = rank
        self.table: Dict[Tuple[int, int], Tuple[Tuple[int, Raw], ...]] = {}
        for key, entries in table.items():
            merged: Dict[int, Raw] = {}
            for k, c in entries:
                merged[k] = merged.get(k, 0) + c
            cleaned = tuple((k, ring.reduce(c)) for k, c in sorted(merged.items()) if ring.reduce(c) != 0)
            if cleaned:
                self.table[key] = cleaned
        self._by_left: List[List[Tuple[int, Tuple[Tuple[int, Raw], ...]]]] = [[] for _ in range(rank)]
        for (i, j), entries in sorted(self.table.items()):
            self._by_left[i].append((j, entries))

    @classmethod
    def from_tensor(cls, ring: RingDescriptor, tensor: Sequence[Sequence[Sequence[Raw]]]) -> "BilinearMap":
        rank = len(tensor)
        if any(len(row) != rank or any(len(cell) != rank for cell in row) for row in tensor):
            raise DimensionMismatchError(f"structure tensor must be {rank}x{rank}x{rank}")
        table = {}
        for i in range(rank):
            for j in range(rank):
                entries = [(k, c) for k, c in enumerate(tensor[i][j]) if c != 0]
                if entries:
                    table[(i, j)] = entries
        return cls(ring, rank, table)

    @classmethod
    def from_function(cls, ring: RingDescriptor, rank: int, f: Callable[[Vector, Vector], Vector]) -> "BilinearMap":
        basis = [Vector.basis(ring, rank, i) for i in range(rank)]
        table = {}
        for i in range(rank):
            for j in range(rank):
                image = f(basis[i], basis[j])
                entries = [(k, c) for k, c in enumerate(image.raw) if c != 0]
                if entries:
                    table[(i, j)] = entries
        return cls(ring, rank, table)

    def apply_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Tuple[Raw, ...]:
        acc = [0] * self.rank
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, entries in self._by_left[i]:
                yj = y[j]
                if yj:
                    f = xi * yj
                    for k, c in entries:
                        acc[k] += f * c
        reduce = self.ring.reduce
        return tuple(reduce(a) for a in acc)

    def apply(self, x: Vector, y: Vector) -> Vector:
        for v in (x, y):
            if v.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {v.ring}")
            if len(v) != self.rank:
                raise DimensionMismatchError(f"rank {self.rank} vs vector of length {len(v)}")
        return Vector(self.ring, self.apply_raw(x.raw, y.raw))

    def tensor(self) -> List[List[List[Raw]]]:
        zero = self.ring.reduce(0)
        out = [[[zero] * self.rank for _ in range(self.rank)] for _ in range(self.rank)]
        for (i, j), entries in self.table.items():
            for k, c in entries:
                out[i][j][k] = c
        return out

    def perturbed(self, i: int, j: int, k: int, delta: Raw = 1) -> "BilinearMap":
        """Copy with one structure constant shifted; used by negative controls."""
        table = {key: list(v) for key, v in self.table.items()}
        table.setdefault((i, j), []).append((k, delta))
        return BilinearMap(self.ring, self.rank, table)

    def scale(self, factor: Raw) -> "BilinearMap":
        return BilinearMap(self.ring, self.rank, {key: [(k, c * factor) for k, c in v] for key, v in self.table.items()})

    def transform(self, t_out: LinearMap, t_left: LinearMap, t_right: LinearMap) -> "BilinearMap":
        """(x, y) -> t_out(self(t_left x, t_right y))."""
        return BilinearMap.from_function(
            self.ring, self.rank,
            lambda x, y: t_out.apply(self.apply(t_left.apply(x), t_right.apply(y))),
        )

    def base_change(self, ring: RingDescriptor) -> "BilinearMap":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return BilinearMap(ring, self.rank, {key: list(v) for key, v in self.table.items()})

    def __eq__(self, other):
        if not isinstance(other, BilinearMap):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.table == other.table

    def __hash__(self):
        return hash((self.ring, self.rank, tuple(sorted(self.table.items()))))


class CompositionAlgebra:
    def __init__(self, space: QuadraticSpace, mult: BilinearMap, unity: Optional[Vector], kind: AlgebraKind):
        if space.rank != RANK or mult.rank != RANK:
            raise DimensionMismatchError("composition algebras have rank 8")
        if mult.ring != space.ring or (unity is not None and unity.ring != space.ring):
            raise RingMismatchError("space, product and unity must share a ring")
        self.space = space
        self.mult = mult
        self.unity = unity
        self.kind = AlgebraKind(kind)

    @property
    def ring(self) -> RingDescriptor:
        return self.space.ring

    def multiply(self, x: Vector, y: Vector) -> Vector:
        return self.mult.apply(x, y)

    def norm(self, x: Vector):
        return self.space.evaluate(x)

    def __repr__(self):
        return f"CompositionAlgebra({self.ring}, kind={self.kind.value})"


class CompositionOfForms:
    """(C1, C2, C3, q1, q2, q3, m) with m: C3 x C2 -> C1."""

    def __init__(self, c1: QuadraticSpace, c2: QuadraticSpace, c3: QuadraticSpace, m: BilinearMap):
        if any(c.rank != RANK for c in (c1, c2, c3)) or m.rank != RANK:
            raise DimensionMismatchError("compositions of forms have rank 8")
        if not c1.ring == c2.ring == c3.ring == m.ring:
            raise RingMismatchError("all three forms and the map must share a ring")
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3
        self.m = m

    @property
    def ring(self) -> RingDescriptor:
        return self.c1.ring

    @property
    def forms(self) -> Tuple[QuadraticSpace, QuadraticSpace, QuadraticSpace]:
        return self.c1, self.c2, self.c3

    def apply(self, x: Vector, y: Vector) -> Vector:
        return self.m.apply(x, y)

    def base_change(self, ring: RingDescriptor) -> "CompositionOfForms":
        return CompositionOfForms(
            self.c1.base_change(ring), self.c2.base_change(ring), self.c3.base_change(ring), self.m.base_change(ring)
        )

    def __repr__(self):
        return f"CompositionOfForms({self.ring})"


class TripleMap:
    def __init__(self, t1: LinearMap, t2: LinearMap, t3: LinearMap):
        for t in (t1, t2, t3):
            if t.n_in != RANK or t.n_out != RANK:
                raise DimensionMismatchError("triple maps act on rank-8 modules")
        if not t1.ring == t2.ring == t3.ring:
            raise RingMismatchError("triple components must share a ring")
        self.t1 = t1
        self.t2 = t2
        self.t3 = t3

    @classmethod
    def identity(cls, ring: RingDescriptor) -> "TripleMap":
        ident = LinearMap.identity(ring, RANK)
        return cls(ident, ident, ident)

    @property
    def ring(self) -> RingDescriptor:
        return self.t1.ring

    @property
    def maps(self) -> Tuple[LinearMap, LinearMap, LinearMap]:
        return self.t1, self.t2, self.t3

    def compose(self, other: "TripleMap") -> "TripleMap":
        """Componentwise self after other."""
        return TripleMap(self.t1.compose(other.t1), self.t2.compose(other.t2), self.t3.compose(other.t3))

    def inverse(self) -> "TripleMap":
        return TripleMap(self.t1.inverse(), self.t2.inverse(), self.t3.inverse())

    def is_invertible(self) -> bool:
        return all(t.is_invertible() for t in self.maps)

    def __eq__(self, other):
        if not isinstance(other, TripleMap):
            return NotImplemented
        return self.maps == other.maps

    def __hash__(self):
        return hash(self.maps)

    def __repr__(self):
        return f"TripleMap({self.ring})"
