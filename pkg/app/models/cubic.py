"""Cubic norm structures and the Jordan operations derived from them.

A structure is stored as its base point, the full coefficient table of the
cubic norm N, one quadratic polynomial per coordinate of the adjoint x -> x^#
and the Gram matrix of the bilinear trace T. Everything else (cross product,
U-operator, triple and circle products) is derived on demand.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.core.exceptions import (
    DimensionMismatchError,
    NotAUnitError,
    NotInvertibleError,
    RingMismatchError,
)
from app.models.polynomial import Polynomial, decode
from app.models.quadspace import LinearMap, ScalarLike, Vector
from app.models.scalars import Raw, RingDescriptor, RingKind, Scalar


@dataclass(frozen=True)
class IsotopeOrigin:
    """How an isotope was derived: adjoint = shift o parent adjoint, same norm.

    `shift` is U_{p^-1} and `unshift` is U_{(p^-1)^#}; both are kept so the
    cubic identities of the isotope can be reduced to those of the parent.
    """

    parent: "CubicNormStructure"
    p: Vector
    shift: LinearMap
    unshift: LinearMap


class CubicNormStructure:
    def __init__(
        self,
        ring: RingDescriptor,
        rank: int,
        basepoint: Vector,
        norm: Polynomial,
        adjoint: Sequence[Polynomial],
        trace_gram: Sequence[Sequence[Raw]],
        origin: Optional[IsotopeOrigin] = None,
    ):
        if len(basepoint) != rank or norm.nvars != rank or len(adjoint) != rank:
            raise DimensionMismatchError(f"cubic norm structure data does not match rank {rank}")
        if any(p.nvars != rank for p in adjoint):
            raise DimensionMismatchError("adjoint coordinates must be polynomials in rank variables")
        if len(trace_gram) != rank or any(len(row) != rank for row in trace_gram):
            raise DimensionMismatchError(f"trace Gram matrix must be {rank}x{rank}")
        if basepoint.ring != ring or norm.ring != ring or any(p.ring != ring for p in adjoint):
            raise RingMismatchError("structure data must live over one ring")
        if norm.degree > 3 or any(p.degree > 2 for p in adjoint):
            raise DimensionMismatchError("norm must be cubic and adjoint quadratic")
        self.ring = ring
        self.rank = rank
        self.basepoint = basepoint
        self.norm_poly = norm
        self.adjoint_polys: Tuple[Polynomial, ...] = tuple(adjoint)
        self.trace_gram: Tuple[Tuple[Raw, ...], ...] = tuple(tuple(ring.reduce(v) for v in row) for row in trace_gram)
        self.origin = origin
        # set once the coefficient-level identities have been checked
        self.cns_verified = False

        self._norm_terms = [(tuple(v for v, e in decode(m) for _ in range(e)), c) for m, c in norm.terms.items()]
        # adjoint term c * x_i * x_j (i <= j) filed under i as (k, j, c)
        self._adj_by_var: List[List[Tuple[int, int, Raw]]] = [[] for _ in range(rank)]
        # polar form of the adjoint: cross(x, y)_k = sum_i x_i * sum c * y_j
        self._polar_by_var: List[List[Tuple[int, int, Raw]]] = [[] for _ in range(rank)]
        for k, poly in enumerate(self.adjoint_polys):
            for m, c in poly.terms.items():
                idx = [v for v, e in decode(m) for _ in range(e)]
                if len(idx) != 2:
                    raise DimensionMismatchError(f"adjoint coordinate {k} is not a quadratic form")
                i, j = idx
                self._adj_by_var[i].append((k, j, c))
                if i == j:
                    self._polar_by_var[i].append((k, i, 2 * c))
                else:
                    self._polar_by_var[i].append((k, j, c))
                    self._polar_by_var[j].append((k, i, c))
        self._trace_rows = [[(j, g) for j, g in enumerate(row) if g != 0] for row in self.trace_gram]

    def __repr__(self):
        return f"CubicNormStructure({self.ring}, rank={self.rank})"

    # Coordinates

    def _check(self, *vectors: Vector):
        for x in vectors:
            if x.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {x.ring}")
            if len(x) != self.rank:
                raise DimensionMismatchError(f"rank {self.rank} vs element of length {len(x)}")

    def one(self) -> Vector:
        return self.basepoint

    def zero(self) -> Vector:
        return Vector.zero(self.ring, self.rank)

    def basis(self, i: int) -> Vector:
        return Vector.basis(self.ring, self.rank, i)

    def element(self, values: Sequence[ScalarLike]) -> Vector:
        x = Vector.of(self.ring, values)
        self._check(x)
        return x

    # Raw kernels

    def norm_raw(self, x: Sequence[Raw]) -> Raw:
        total = 0
        for idx, c in self._norm_terms:
            for v in idx:
                xv = x[v]
                if not xv:
                    break
                c = c * xv
            else:
                total += c
        return self.ring.reduce(total)

    def adjoint_raw(self, x: Sequence[Raw]) -> Tuple[Raw, ...]:
        acc = [0] * self.rank
        for i, xi in enumerate(x):
            if xi:
                for k, j, c in self._adj_by_var[i]:
                    xj = x[j]
                    if xj:
                        acc[k] += c * xi * xj
        reduce = self.ring.reduce
        return tuple(reduce(a) for a in acc)

    def cross_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Tuple[Raw, ...]:
        acc = [0] * self.rank
        for i, xi in enumerate(x):
            if xi:
                for k, j, c in self._polar_by_var[i]:
                    yj = y[j]
                    if yj:
                        acc[k] += c * xi * yj
        reduce = self.ring.reduce
        return tuple(reduce(a) for a in acc)

    def trace_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Raw:
        total = 0
        for i, xi in enumerate(x):
            if xi:
                total += xi * sum(g * y[j] for j, g in self._trace_rows[i])
        return self.ring.reduce(total)

    def u_op_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Tuple[Raw, ...]:
        t = self.trace_raw(x, y)
        c = self.cross_raw(self.adjoint_raw(x), y)
        reduce = self.ring.reduce
        return tuple(reduce(t * a - b) for a, b in zip(x, c))

    def triple_raw(self, a: Sequence[Raw], b: Sequence[Raw], c: Sequence[Raw]) -> Tuple[Raw, ...]:
        # linearization of U_x y = T(x, y) x - x^# x y in x
        tab = self.trace_raw(a, b)
        tcb = self.trace_raw(c, b)
        w = self.cross_raw(self.cross_raw(a, c), b)
        reduce = self.ring.reduce
        return tuple(reduce(tab * ci + tcb * ai - wi) for ai, ci, wi in zip(a, c, w))

    # Public operations

    def norm(self, x: Vector) -> Scalar:
        self._check(x)
        return Scalar(self.ring, self.norm_raw(x.raw))

    def adjoint(self, x: Vector) -> Vector:
        self._check(x)
        return Vector(self.ring, self.adjoint_raw(x.raw))

    def cross(self, x: Vector, y: Vector) -> Vector:
        self._check(x, y)
        return Vector(self.ring, self.cross_raw(x.raw, y.raw))

    def trace_bilinear(self, x: Vector, y: Vector) -> Scalar:
        self._check(x, y)
        return Scalar(self.ring, self.trace_raw(x.raw, y.raw))

    def trace(self, x: Vector) -> Scalar:
        return self.trace_bilinear(x, self.basepoint)

    def quadratic_trace(self, x: Vector) -> Scalar:
        self._check(x)
        return Scalar(self.ring, self.trace_raw(self.adjoint_raw(x.raw), self.basepoint.raw))

    def u_op(self, x: Vector, y: Vector) -> Vector:
        self._check(x, y)
        return Vector(self.ring, self.u_op_raw(x.raw, y.raw))

    def u_matrix(self, x: Vector) -> LinearMap:
        self._check(x)
        columns = [self.u_op_raw(x.raw, Vector.basis(self.ring, self.rank, j).raw) for j in range(self.rank)]
        return LinearMap.from_raw(self.ring, [list(r) for r in zip(*columns)])

    def triple_product(self, a: Vector, b: Vector, c: Vector) -> Vector:
        self._check(a, b, c)
        return Vector(self.ring, self.triple_raw(a.raw, b.raw, c.raw))

    def circle(self, x: Vector, y: Vector) -> Vector:
        self._check(x, y)
        return Vector(self.ring, self.triple_raw(x.raw, self.basepoint.raw, y.raw))

    def square(self, x: Vector) -> Vector:
        self._check(x)
        return Vector(self.ring, self.u_op_raw(x.raw, self.basepoint.raw))

    def jordan_product(self, x: Vector, y: Vector) -> Vector:
        """x . y = (x o y) / 2; needs 2 to be a unit."""
        two = self.ring.element(2)
        if not two.is_unit():
            raise NotAUnitError(f"2 is not a unit in {self.ring}")
        return self.circle(x, y).scale(two.invert())

    def is_invertible(self, p: Vector) -> bool:
        return self.norm(p).is_unit()

    def inverse(self, p: Vector) -> Vector:
        n = self.norm(p)
        if not n.is_unit():
            raise NotInvertibleError(f"N(p) = {n} is not a unit")
        return self.adjoint(p).scale(n.invert())

    # Symbolic views

    def variables(self) -> List[Polynomial]:
        return [Polynomial.variable(self.ring, self.rank, i) for i in range(self.rank)]

    def trace_row(self, y: Vector) -> List[Raw]:
        """Coefficients of the linear form x -> T(x, y), one per coordinate."""
        self._check(y)
        return [self.trace_raw(Vector.basis(self.ring, self.rank, i).raw, y.raw) for i in range(self.rank)]

    def base_change(self, ring: RingDescriptor) -> "CubicNormStructure":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return CubicNormStructure(
            ring,
            self.rank,
            self.basepoint.base_change(ring),
            self.norm_poly.base_change(ring),
            [p.base_change(ring) for p in self.adjoint_polys],
            self.trace_gram,
        )

    def same_data(self, other: "CubicNormStructure") -> bool:
        return (
            self.ring == other.ring
            and self.rank == other.rank
            and self.basepoint == other.basepoint
            and self.norm_poly == other.norm_poly
            and self.adjoint_polys == other.adjoint_polys
            and self.trace_gram == other.trace_gram
        )
