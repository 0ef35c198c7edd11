"""Vectors, quadratic forms and linear maps on free modules of finite rank."""
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from app.core.exceptions import (
    DimensionMismatchError,
    NotAUnitError,
    NotInvertibleError,
    PreconditionError,
    RingMismatchError,
)
from app.models import matrix
from app.models.polynomial import Polynomial
from app.models.scalars import Raw, RingDescriptor, RingKind, Scalar

ScalarLike = Union[Scalar, int, str]


class Vector:
    """Coordinates with respect to the standard basis b_0, ..., b_{n-1}."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring: RingDescriptor, raw: Iterable[Raw]):
        self.ring = ring
        self.raw = tuple(raw)

    @classmethod
    def of(cls, ring: RingDescriptor, values: Iterable[ScalarLike]) -> "Vector":
        return cls(ring, (ring.element(v).value for v in values))

    @classmethod
    def zero(cls, ring: RingDescriptor, n: int) -> "Vector":
        return cls(ring, [ring.reduce(0)] * n)

    @classmethod
    def basis(cls, ring: RingDescriptor, n: int, i: int) -> "Vector":
        zero, one = ring.reduce(0), ring.reduce(1)
        return cls(ring, (one if k == i else zero for k in range(n)))

    def __len__(self) -> int:
        return len(self.raw)

    def __getitem__(self, i: int) -> Scalar:
        return Scalar(self.ring, self.raw[i])

    def __iter__(self) -> Iterator[Scalar]:
        return (Scalar(self.ring, v) for v in self.raw)

    def _check(self, other: "Vector"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        if len(other.raw) != len(self.raw):
            raise DimensionMismatchError(f"rank {len(self.raw)} vs {len(other.raw)}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        reduce = self.ring.reduce
        return Vector(self.ring, (reduce(a + b) for a, b in zip(self.raw, other.raw)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        reduce = self.ring.reduce
        return Vector(self.ring, (reduce(a - b) for a, b in zip(self.raw, other.raw)))

    def __neg__(self) -> "Vector":
        reduce = self.ring.reduce
        return Vector(self.ring, (reduce(-a) for a in self.raw))

    def scale(self, factor: ScalarLike) -> "Vector":
        f = self.ring.element(factor).value
        reduce = self.ring.reduce
        return Vector(self.ring, (reduce(f * a) for a in self.raw))

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.ring == other.ring and self.raw == other.raw

    def __hash__(self):
        return hash((self.ring, self.raw))

    def __repr__(self):
        return f"Vector({self.ring}, [{', '.join(str(v) for v in self.raw)}])"

    def is_zero(self) -> bool:
        return not any(self.raw)

    def support(self) -> List[int]:
        return [i for i, v in enumerate(self.raw) if v]

    def to_strings(self) -> List[str]:
        return [str(v) for v in self.raw]

    def base_change(self, ring: RingDescriptor) -> "Vector":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return Vector(ring, (ring.reduce(v) for v in self.raw))


def combine(ring: RingDescriptor, n: int, parts: Iterable[Tuple[Raw, Vector]]) -> Vector:
    """Linear combination sum(c * v) without intermediate reductions."""
    acc = [0] * n
    for c, v in parts:
        if not c:
            continue
        for i, x in enumerate(v.raw):
            if x:
                acc[i] += c * x
    return Vector(ring, (ring.reduce(a) for a in acc))


class QuadraticSpace:
    """q(x) = sum over i <= j of coeffs[i][j] * x_i * x_j."""

    def __init__(self, ring: RingDescriptor, rank: int, coeffs: Sequence[Sequence[ScalarLike]]):
        if rank <= 0:
            raise DimensionMismatchError("rank must be positive")
        if len(coeffs) != rank or any(len(row) != rank for row in coeffs):
            raise DimensionMismatchError(f"coefficient table must be {rank}x{rank}")
        table = [[ring.element(c).value for c in row] for row in coeffs]
        for i in range(rank):
            for j in range(i):
                if table[i][j] != 0:
                    raise PreconditionError(f"coefficient table is not upper triangular at ({i}, {j})")
        self.ring = ring
        self.rank = rank
        self.coeffs: Tuple[Tuple[Raw, ...], ...] = tuple(tuple(row) for row in table)
        self._terms = [(i, j, table[i][j]) for i in range(rank) for j in range(i, rank) if table[i][j] != 0]
        self._gram = [[self._polar_entry(i, j) for j in range(rank)] for i in range(rank)]
        self._gram_rows = [[(j, g) for j, g in enumerate(row) if g != 0] for row in self._gram]

    @classmethod
    def from_terms(cls, ring: RingDescriptor, rank: int, terms: Iterable[Tuple[int, int, Raw]]) -> "QuadraticSpace":
        table = [[0] * rank for _ in range(rank)]
        for i, j, c in terms:
            i, j = min(i, j), max(i, j)
            table[i][j] += c
        return cls(ring, rank, [[ring.reduce(c) for c in row] for row in table])

    @classmethod
    def hyperbolic(cls, ring: RingDescriptor, pairs: int) -> "QuadraticSpace":
        """Orthogonal sum of hyperbolic planes x_{2k} x_{2k+1}."""
        return cls.from_terms(ring, 2 * pairs, [(2 * k, 2 * k + 1, 1) for k in range(pairs)])

    def terms(self) -> List[Tuple[int, int, Raw]]:
        """Nonzero (i, j, c) with i <= j."""
        return list(self._terms)

    def _polar_entry(self, i: int, j: int) -> Raw:
        if i == j:
            return self.ring.reduce(2 * self.coeffs[i][i])
        a, b = min(i, j), max(i, j)
        return self.coeffs[a][b]

    def _check(self, x: Vector):
        if x.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {x.ring}")
        if len(x) != self.rank:
            raise DimensionMismatchError(f"rank {self.rank} vs vector of length {len(x)}")

    def evaluate_raw(self, raw: Sequence[Raw]) -> Raw:
        return self.ring.reduce(sum(c * raw[i] * raw[j] for i, j, c in self._terms))

    def evaluate(self, x: Vector) -> Scalar:
        self._check(x)
        return Scalar(self.ring, self.evaluate_raw(x.raw))

    def polarize_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Raw:
        total = 0
        for i, xi in enumerate(x):
            if xi:
                total += xi * sum(g * y[j] for j, g in self._gram_rows[i])
        return self.ring.reduce(total)

    def polarize(self, x: Vector, y: Vector) -> Scalar:
        self._check(x)
        self._check(y)
        return Scalar(self.ring, self.polarize_raw(x.raw, y.raw))

    def gram_raw(self) -> List[List[Raw]]:
        return [list(row) for row in self._gram]

    def gram(self) -> List[List[Scalar]]:
        return [[Scalar(self.ring, g) for g in row] for row in self._gram]

    def gram_determinant(self) -> Scalar:
        return Scalar(self.ring, matrix.determinant(self.ring, self._gram))

    def is_nonsingular(self) -> bool:
        return self.gram_determinant().is_unit()

    def scale(self, factor: ScalarLike) -> "QuadraticSpace":
        lam = self.ring.element(factor)
        if not lam.is_unit():
            raise NotAUnitError(f"{lam} is not a unit in {self.ring}")
        return QuadraticSpace(self.ring, self.rank, [[Scalar(self.ring, self.ring.reduce(lam.value * c)) for c in row] for row in self.coeffs])

    def as_polynomial(self) -> Polynomial:
        return Polynomial.from_indices(self.ring, self.rank, (((i, j), c) for i, j, c in self._terms))

    def base_change(self, ring: RingDescriptor) -> "QuadraticSpace":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return QuadraticSpace(ring, self.rank, [[ring.element(c) for c in row] for row in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, QuadraticSpace):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"QuadraticSpace({self.ring}, rank={self.rank})"


class LinearMap:
    """Matrix acting on column vectors; column j is the image of b_j."""

    def __init__(self, ring: RingDescriptor, rows: Sequence[Sequence[ScalarLike]]):
        if not rows or not rows[0]:
            raise DimensionMismatchError("empty matrix")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionMismatchError("ragged matrix")
        self.ring = ring
        self.rows: Tuple[Tuple[Raw, ...], ...] = tuple(tuple(ring.element(v).value for v in row) for row in rows)
        self.n_out = len(rows)
        self.n_in = width
        self._cols = [[(i, self.rows[i][j]) for i in range(self.n_out) if self.rows[i][j] != 0] for j in range(width)]

    @classmethod
    def from_raw(cls, ring: RingDescriptor, rows: Sequence[Sequence[Raw]]) -> "LinearMap":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.rows = tuple(tuple(ring.reduce(v) for v in row) for row in rows)
        obj.n_out = len(obj.rows)
        obj.n_in = len(obj.rows[0]) if obj.rows else 0
        obj._cols = [[(i, obj.rows[i][j]) for i in range(obj.n_out) if obj.rows[i][j] != 0] for j in range(obj.n_in)]
        return obj

    @classmethod
    def identity(cls, ring: RingDescriptor, n: int) -> "LinearMap":
        return cls.from_raw(ring, matrix.identity(ring, n))

    @classmethod
    def from_columns(cls, ring: RingDescriptor, columns: Sequence[Vector]) -> "LinearMap":
        return cls.from_raw(ring, matrix.transpose([c.raw for c in columns]))

    @classmethod
    def from_function(cls, ring: RingDescriptor, n: int, f) -> "LinearMap":
        """Matrix of a linear function given on the standard basis."""
        return cls.from_columns(ring, [f(Vector.basis(ring, n, j)) for j in range(n)])

    @property
    def is_square(self) -> bool:
        return self.n_in == self.n_out

    def apply_raw(self, raw: Sequence[Raw]) -> Tuple[Raw, ...]:
        acc = [0] * self.n_out
        for j, v in enumerate(raw):
            if v:
                for i, m in self._cols[j]:
                    acc[i] += m * v
        reduce = self.ring.reduce
        return tuple(reduce(a) for a in acc)

    def apply(self, x: Vector) -> Vector:
        if x.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {x.ring}")
        if len(x) != self.n_in:
            raise DimensionMismatchError(f"map takes rank {self.n_in}, got {len(x)}")
        return Vector(self.ring, self.apply_raw(x.raw))

    def __call__(self, x: Vector) -> Vector:
        return self.apply(x)

    def column(self, j: int) -> Vector:
        return Vector(self.ring, (row[j] for row in self.rows))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        if other.n_out != self.n_in:
            raise DimensionMismatchError(f"cannot compose {self.n_out}x{self.n_in} after {other.n_out}x{other.n_in}")
        return LinearMap.from_raw(self.ring, matrix.matmul(self.ring, self.rows, other.rows))

    def determinant(self) -> Scalar:
        return Scalar(self.ring, matrix.determinant(self.ring, self.rows))

    def is_invertible(self) -> bool:
        return self.is_square and self.determinant().is_unit()

    def inverse(self) -> "LinearMap":
        if not self.is_square:
            raise NotInvertibleError("non-square map")
        return LinearMap.from_raw(self.ring, matrix.inverse(self.ring, self.rows))

    def transpose(self) -> "LinearMap":
        return LinearMap.from_raw(self.ring, matrix.transpose(self.rows))

    def scale(self, factor: ScalarLike) -> "LinearMap":
        f = self.ring.element(factor).value
        return LinearMap.from_raw(self.ring, [[f * v for v in row] for row in self.rows])

    def as_polynomials(self) -> List[Polynomial]:
        """Coordinate functions of x -> self(x) as linear polynomials."""
        return [Polynomial.linear(self.ring, row) for row in self.rows]

    def base_change(self, ring: RingDescriptor) -> "LinearMap":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return LinearMap.from_raw(ring, self.rows)

    def to_strings(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.rows]

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __repr__(self):
        return f"LinearMap({self.ring}, {self.n_out}x{self.n_in})"


def evaluate(q: QuadraticSpace, x: Vector) -> Scalar:
    return q.evaluate(x)


def polarize(q: QuadraticSpace, x: Vector, y: Vector) -> Scalar:
    return q.polarize(x, y)


def gram(q: QuadraticSpace) -> List[List[Scalar]]:
    return q.gram()


def is_nonsingular(q: QuadraticSpace) -> bool:
    return q.is_nonsingular()


def scale(q: QuadraticSpace, factor: ScalarLike) -> QuadraticSpace:
    return q.scale(factor)


def isometry_defect(t: LinearMap, q_src: QuadraticSpace, q_dst: QuadraticSpace) -> Optional[dict]:
    """First basis index or pair where q_dst(t(.)) and q_src disagree.

    Values at b_i and polar values at (b_i, b_j) determine a quadratic form
    over any commutative ring, so agreement there is agreement everywhere.
    """
    if t.n_in != q_src.rank or t.n_out != q_dst.rank:
        raise DimensionMismatchError(f"map {t.n_out}x{t.n_in} between ranks {q_src.rank} and {q_dst.rank}")
    images = [t.column(j).raw for j in range(t.n_in)]
    for i in range(t.n_in):
        if q_dst.evaluate_raw(images[i]) != q_src.coeffs[i][i]:
            return {"basis": [i], "expected": str(q_src.coeffs[i][i]), "got": str(q_dst.evaluate_raw(images[i]))}
    for i in range(t.n_in):
        for j in range(i + 1, t.n_in):
            got = q_dst.polarize_raw(images[i], images[j])
            if got != q_src.coeffs[i][j]:
                return {"basis": [i, j], "expected": str(q_src.coeffs[i][j]), "got": str(got)}
    return None


def is_isometry(t: LinearMap, q_src: QuadraticSpace, q_dst: QuadraticSpace) -> bool:
    if q_src.ring != t.ring or q_dst.ring != t.ring:
        raise RingMismatchError("map and forms live over different rings")
    if isometry_defect(t, q_src, q_dst) is not None:
        return False
    return t.is_invertible()


def kernel_basis(t: LinearMap) -> List[Vector]:
    """Null space of t; integer maps are lifted to the rationals first."""
    ring = t.ring.fraction_field()
    rows = [[ring.reduce(v) for v in row] for row in t.rows]
    return [Vector(ring, v) for v in matrix.kernel(ring, rows, t.n_in)]
