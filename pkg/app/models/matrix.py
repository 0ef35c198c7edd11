"""Exact dense linear algebra on raw ring values.

Matrices are lists of rows. Elimination needs field scalars; integer
matrices are lifted to the rationals by the callers that need it, except
`determinant`, which runs fraction-free (Bareiss) over the integers.
"""
from typing import List, Optional, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError, NotInvertibleError, UnsupportedRingError
from app.models.scalars import Raw, RingDescriptor, RingKind

Matrix = List[List[Raw]]


def identity(ring: RingDescriptor, n: int) -> Matrix:
    one, zero = ring.reduce(1), ring.reduce(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence[Raw]]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(ring: RingDescriptor, a: Sequence[Sequence[Raw]], b: Sequence[Sequence[Raw]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise DimensionMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    cols = transpose(b)
    reduce = ring.reduce
    return [[reduce(sum(x * y for x, y in zip(row, col) if x and y)) for col in cols] for row in a]


def _require_field(ring: RingDescriptor):
    if not ring.is_field:
        raise UnsupportedRingError(f"elimination needs field scalars, got {ring}")


def row_reduce(ring: RingDescriptor, rows: Sequence[Sequence[Raw]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    _require_field(ring)
    reduce = ring.reduce
    m = [[reduce(v) for v in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ring.invert_raw(m[r][col])
        m[r] = [reduce(v * inv) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [reduce(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(ring: RingDescriptor, rows: Sequence[Sequence[Raw]]) -> int:
    return len(row_reduce(ring, rows)[1])


def determinant(ring: RingDescriptor, rows: Sequence[Sequence[Raw]]) -> Raw:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        return ring.reduce(1)
    if ring.kind is RingKind.INTEGERS:
        return _bareiss(rows)
    reduce = ring.reduce
    m = [[reduce(v) for v in row] for row in rows]
    det = ring.reduce(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return ring.reduce(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = reduce(det * m[col][col])
        inv = ring.invert_raw(m[col][col])
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = reduce(m[i][col] * inv)
                m[i] = [reduce(a - f * b) for a, b in zip(m[i], m[col])]
    return reduce(det)


def _bareiss(rows: Sequence[Sequence[int]]) -> int:
    m = [list(row) for row in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(ring: RingDescriptor, rows: Sequence[Sequence[Raw]]) -> Matrix:
    """Inverse over the ring itself; integer matrices must have determinant +-1."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError("inverse of a non-square matrix")
    work = ring.fraction_field()
    augmented = [list(row) + ident for row, ident in zip(rows, identity(work, n))]
    reduced, pivots = row_reduce(work, augmented)
    if pivots[:n] != list(range(n)):
        raise NotInvertibleError("matrix is singular")
    inv = [row[n:] for row in reduced]
    if work != ring:
        if any(v.denominator != 1 for row in inv for v in row):
            raise NotInvertibleError("matrix is not invertible over Z")
        inv = [[ring.reduce(v) for v in row] for row in inv]
    return inv


def kernel(ring: RingDescriptor, rows: Sequence[Sequence[Raw]], ncols: Optional[int] = None) -> List[List[Raw]]:
    """Null space basis, one vector per free column of the reduced echelon form."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    reduced, pivots = row_reduce(ring, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero, one = ring.reduce(0), ring.reduce(1)
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = ring.reduce(-reduced[r][f])
        basis.append(v)
    return basis


def solve(ring: RingDescriptor, rows: Sequence[Sequence[Raw]], rhs: Sequence[Raw]) -> Optional[List[Raw]]:
    """One solution of rows * x = rhs, or None when the system is inconsistent."""
    n = len(rows[0]) if rows else 0
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = row_reduce(ring, augmented)
    if n in pivots:
        return None
    x = [ring.reduce(0)] * n
    for r, p in enumerate(pivots):
        x[p] = reduced[r][n]
    return x
