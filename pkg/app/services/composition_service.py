"""Constructions and verifiers for composition algebras and compositions of forms.

Bi-quadratic identities such as q1(m(x, y)) = q3(x) q2(y) are decided on the
36 x 36 pairs drawn from S = {b_i} u {b_i + b_j}: a form that is quadratic in
each argument is determined by those values over any commutative ring.
"""
import itertools
import logging
from functools import lru_cache
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import (
    DimensionMismatchError,
    NotAUnitError,
    NotInvertibleError,
    PreconditionError,
    ValidationFailure,
)
from app.models import matrix
from app.models.composition import RANK, AlgebraKind, BilinearMap, CompositionAlgebra, CompositionOfForms, TripleMap
from app.models.quadspace import LinearMap, QuadraticSpace, Vector, is_isometry, isometry_defect
from app.models.scalars import Raw, RingDescriptor, RingKind, Scalar
from app.services.sampling import SampleStream, random_element, random_sl3

logger = logging.getLogger(__name__)

# Zorn vector matrices [[a, x], [y, b]]: a, b, x1..x3, y1..y3
A, B = 0, 1
X = (2, 3, 4)
Y = (5, 6, 7)


def _cross3(u: Sequence[Raw], v: Sequence[Raw]) -> Tuple[Raw, Raw, Raw]:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot3(u: Sequence[Raw], v: Sequence[Raw]) -> Raw:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _zorn_product(ring: RingDescriptor, p: Vector, r: Vector) -> Vector:
    a, b, x, y = p.raw[A], p.raw[B], [p.raw[i] for i in X], [p.raw[i] for i in Y]
    a2, b2, x2, y2 = r.raw[A], r.raw[B], [r.raw[i] for i in X], [r.raw[i] for i in Y]
    yy = _cross3(y, y2)
    xx = _cross3(x, x2)
    out = [0] * RANK
    out[A] = a * a2 + _dot3(x, y2)
    out[B] = _dot3(y, x2) + b * b2
    for k in range(3):
        out[X[k]] = a * x2[k] + b2 * x[k] - yy[k]
        out[Y[k]] = a2 * y[k] + b * y2[k] + xx[k]
    return Vector(ring, (ring.reduce(v) for v in out))


def zorn_form(ring: RingDescriptor) -> QuadraticSpace:
    """q([[a, x], [y, b]]) = ab - x.y"""
    return QuadraticSpace.from_terms(ring, RANK, [(A, B, 1)] + [(X[k], Y[k], -1) for k in range(3)])


@lru_cache(maxsize=None)
def zorn_octonion(ring: RingDescriptor) -> CompositionAlgebra:
    """The split octonions as vector matrices, validated before return."""
    mult = BilinearMap.from_function(ring, RANK, lambda p, r: _zorn_product(ring, p, r))
    unity = Vector(ring, [ring.reduce(1), ring.reduce(1)] + [ring.reduce(0)] * 6)
    algebra = CompositionAlgebra(zorn_form(ring), mult, unity, AlgebraKind.OCTONION)
    validate_algebra(algebra)
    logger.debug("built Zorn octonions over %s", ring)
    return algebra


def conjugate(algebra: CompositionAlgebra, x: Vector) -> Vector:
    """x -> <x, 1> 1 - x, valid in every characteristic."""
    if algebra.kind is not AlgebraKind.OCTONION or algebra.unity is None:
        raise PreconditionError("conjugation needs an octonion algebra")
    t = algebra.space.polarize(x, algebra.unity)
    return algebra.unity.scale(t) - x


def conjugation_map(algebra: CompositionAlgebra) -> LinearMap:
    return LinearMap.from_function(algebra.ring, RANK, lambda x: conjugate(algebra, x))


def para(algebra: CompositionAlgebra) -> CompositionAlgebra:
    """Para-algebra with product x * y = conj(x) conj(y) on the same form."""
    if algebra.kind is not AlgebraKind.OCTONION:
        raise PreconditionError("para needs an octonion algebra")
    kappa = conjugation_map(algebra)
    mult = algebra.mult.transform(LinearMap.identity(algebra.ring, RANK), kappa, kappa)
    result = CompositionAlgebra(algebra.space, mult, None, AlgebraKind.PARA)
    validate_algebra(result)
    return result


def composition_of(algebra: CompositionAlgebra) -> CompositionOfForms:
    space = algebra.space
    M = CompositionOfForms(space, space, space, algebra.mult)
    validate_composition(M)
    return M


def delta(algebra: CompositionAlgebra, u1: Vector, u2: Vector, u3: Vector) -> Scalar:
    """Delta(u1, u2, u3) = <u3 * u2, u1>."""
    if algebra.kind is not AlgebraKind.PARA:
        raise PreconditionError("delta is defined on para algebras")
    return algebra.space.polarize(algebra.multiply(u3, u2), u1)


# Validation

def _test_points(ring: RingDescriptor, n: int) -> List[Tuple[Tuple[int, ...], Vector]]:
    basis = [Vector.basis(ring, n, i) for i in range(n)]
    points = [((i,), basis[i]) for i in range(n)]
    points += [((i, j), basis[i] + basis[j]) for i, j in itertools.combinations(range(n), 2)]
    return points


def biquadratic_defect(
    ring: RingDescriptor, n: int, f: Callable[[Vector, Vector], Tuple[Raw, Raw]]
) -> Optional[dict]:
    """First pair of test points where the two sides of a bi-quadratic identity differ."""
    points = _test_points(ring, n)
    for (ix, x), (iy, y) in itertools.product(points, points):
        left, right = f(x, y)
        if left != right:
            return {"x": list(ix), "y": list(iy), "left": str(left), "right": str(right)}
    return None


def multiplicativity_defect(
    q_out: QuadraticSpace, q_left: QuadraticSpace, q_right: QuadraticSpace, m: BilinearMap
) -> Optional[dict]:
    """Witness against q_out(m(x, y)) = q_left(x) q_right(y), or None."""
    ring = q_out.ring

    def sides(x: Vector, y: Vector):
        left = q_out.evaluate_raw(m.apply_raw(x.raw, y.raw))
        return left, ring.reduce(q_left.evaluate_raw(x.raw) * q_right.evaluate_raw(y.raw))

    return biquadratic_defect(ring, RANK, sides)


def symmetry_defect(algebra: CompositionAlgebra) -> Optional[dict]:
    """Witness against <x * y, z> = <x, y * z> on basis triples, or None."""
    q = algebra.space
    n = RANK
    basis = [Vector.basis(algebra.ring, n, i).raw for i in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        left = q.polarize_raw(algebra.mult.apply_raw(basis[i], basis[j]), basis[k])
        right = q.polarize_raw(basis[i], algebra.mult.apply_raw(basis[j], basis[k]))
        if left != right:
            return {"basis": [i, j, k], "left": str(left), "right": str(right)}
    return None


def unitality_defect(algebra: CompositionAlgebra) -> Optional[dict]:
    e = algebra.unity
    if e is None:
        return {"reason": "no unity"}
    if algebra.space.evaluate(e) != 1:
        return {"reason": "q(1) != 1", "value": str(algebra.space.evaluate(e))}
    for i in range(RANK):
        b = Vector.basis(algebra.ring, RANK, i)
        if algebra.multiply(e, b) != b or algebra.multiply(b, e) != b:
            return {"basis": [i], "reason": "1 is not a two-sided unity"}
    return None


def validate_algebra(algebra: CompositionAlgebra) -> None:
    if not algebra.space.is_nonsingular():
        raise ValidationFailure("quadratic form is singular", {"det": str(algebra.space.gram_determinant())})
    witness = multiplicativity_defect(algebra.space, algebra.space, algebra.space, algebra.mult)
    if witness is not None:
        raise ValidationFailure("q(x y) = q(x) q(y) fails", witness)
    if algebra.kind is AlgebraKind.OCTONION:
        witness = unitality_defect(algebra)
        if witness is not None:
            raise ValidationFailure("octonion unity axioms fail", witness)
    if algebra.kind is AlgebraKind.PARA:
        witness = symmetry_defect(algebra)
        if witness is not None:
            raise ValidationFailure("<x y, z> = <x, y z> fails", witness)


def validate_composition(M: CompositionOfForms) -> None:
    for name, q in (("q2", M.c2), ("q3", M.c3)):
        if not q.is_nonsingular():
            raise ValidationFailure(f"{name} has a non-invertible Gram matrix", {"det": str(q.gram_determinant())})
    witness = multiplicativity_defect(M.c1, M.c3, M.c2, M.m)
    if witness is not None:
        raise ValidationFailure("q1(m(x, y)) = q3(x) q2(y) fails", witness)


def exhaustive_multiplicativity(algebra: CompositionAlgebra, limit: Optional[int] = None) -> Optional[dict]:
    """Check q(xy) = q(x)q(y) on every pair of elements of a small prime field algebra."""
    ring = algebra.ring
    if ring.kind is not RingKind.PRIME_FIELD:
        raise PreconditionError("exhaustive enumeration needs a finite field")
    limit = settings.EXHAUSTIVE_PAIR_LIMIT if limit is None else limit
    size = ring.modulus ** RANK
    if size * size > limit:
        raise PreconditionError(f"{size * size} pairs exceed the enumeration limit {limit}")
    elements = [tuple(v) for v in itertools.product(range(ring.modulus), repeat=RANK)]
    norms = {v: algebra.space.evaluate_raw(v) for v in elements}
    for x in elements:
        nx = norms[x]
        for y in elements:
            if norms.get(algebra.mult.apply_raw(x, y)) != ring.reduce(nx * norms[y]):
                return {"x": list(x), "y": list(y)}
    return None


# Companions, scaling, morphisms

def companions(M: CompositionOfForms) -> Tuple[BilinearMap, BilinearMap]:
    """The maps m2: C1 x C3 -> C2 and m3: C2 x C1 -> C3 adjoint to m.

    <m2(x1, x3), x2>_2 = <x1, m(x3, x2)>_1 and <x3, m3(x2, x1)>_3 = <m(x3, x2), x1>_1.
    """
    ring = M.ring
    try:
        b2_inv = matrix.inverse(ring, M.c2.gram_raw())
        b3_inv = matrix.inverse(ring, M.c3.gram_raw())
    except NotInvertibleError as exc:
        raise PreconditionError(f"companions need invertible Gram matrices: {exc}")
    basis = [Vector.basis(ring, RANK, i).raw for i in range(RANK)]
    products = [[M.m.apply_raw(basis[c], basis[j]) for j in range(RANK)] for c in range(RANK)]

    def m2(x1: Vector, x3: Vector) -> Vector:
        c = x3.support()[0]
        a = x1.support()[0]
        rhs = [M.c1.polarize_raw(basis[a], products[c][j]) for j in range(RANK)]
        return Vector(ring, (ring.reduce(sum(b2_inv[r][j] * rhs[j] for j in range(RANK))) for r in range(RANK)))

    def m3(x2: Vector, x1: Vector) -> Vector:
        b = x2.support()[0]
        a = x1.support()[0]
        rhs = [M.c1.polarize_raw(products[k][b], basis[a]) for k in range(RANK)]
        return Vector(ring, (ring.reduce(sum(b3_inv[r][k] * rhs[k] for k in range(RANK))) for r in range(RANK)))

    m2_map = BilinearMap.from_function(ring, RANK, m2)
    m3_map = BilinearMap.from_function(ring, RANK, m3)
    witness = companion_defect(M, m2_map, m3_map)
    if witness is not None:
        raise ValidationFailure("companion identities fail", witness)
    return m2_map, m3_map


def companion_defect(M: CompositionOfForms, m2: BilinearMap, m3: BilinearMap) -> Optional[dict]:
    basis = [Vector.basis(M.ring, RANK, i).raw for i in range(RANK)]
    for a, b, c in itertools.product(range(RANK), repeat=3):
        x1, x2, x3 = basis[a], basis[b], basis[c]
        target = M.c1.polarize_raw(x1, M.m.apply_raw(x3, x2))
        if M.c2.polarize_raw(m2.apply_raw(x1, x3), x2) != target:
            return {"map": "m2", "basis": [a, b, c]}
        if M.c3.polarize_raw(x3, m3.apply_raw(x2, x1)) != M.c1.polarize_raw(M.m.apply_raw(x3, x2), x1):
            return {"map": "m3", "basis": [a, b, c]}
    return None


def scale_composition(M: CompositionOfForms, gamma) -> CompositionOfForms:
    """(g2 g3 q1, g1 g3 q2, g1 g2 q3, g1 m)."""
    g1, g2, g3 = gamma
    for g in (g1, g2, g3):
        if not g.is_unit():
            raise NotAUnitError(f"{g} is not a unit in {M.ring}")
    scaled = CompositionOfForms(M.c1.scale(g2 * g3), M.c2.scale(g1 * g3), M.c3.scale(g1 * g2), M.m.scale(g1.value))
    validate_composition(scaled)
    return scaled


def morphism_defect(t: TripleMap, M: CompositionOfForms, M2: CompositionOfForms) -> Optional[dict]:
    """Witness against t being a morphism M -> M2, or None."""
    for i, (ti, qi, qi2) in enumerate(zip(t.maps, M.forms, M2.forms), start=1):
        witness = isometry_defect(ti, qi, qi2)
        if witness is not None:
            return dict(witness, component=i, reason="not an isometry")
        if not ti.is_invertible():
            return {"component": i, "reason": "not invertible"}
    ring = M.ring
    images3 = [t.t3.column(j).raw for j in range(RANK)]
    images2 = [t.t2.column(j).raw for j in range(RANK)]
    basis = [Vector.basis(ring, RANK, i).raw for i in range(RANK)]
    for a in range(RANK):
        for b in range(RANK):
            left = M2.m.apply_raw(images3[a], images2[b])
            right = t.t1.apply_raw(M.m.apply_raw(basis[a], basis[b]))
            if left != right:
                return {"basis": [a, b], "reason": "m'(t3 x, t2 y) != t1 m(x, y)"}
    return None


def is_morphism(t: TripleMap, M: CompositionOfForms, M2: CompositionOfForms) -> bool:
    return morphism_defect(t, M, M2) is None


def is_related_triple(t: TripleMap, algebra: CompositionAlgebra) -> bool:
    if algebra.kind is not AlgebraKind.PARA:
        raise PreconditionError("related triples are defined for para algebras")
    M = CompositionOfForms(algebra.space, algebra.space, algebra.space, algebra.mult)
    if not is_morphism(t, M, M):
        return False
    if algebra.ring.element(2).is_unit():
        return all(ti.determinant() == 1 for ti in t.maps)
    return True


def is_octonion_automorphism(algebra: CompositionAlgebra, t: LinearMap) -> bool:
    """Unital, multiplicative on basis pairs, and an isometry."""
    if algebra.kind is not AlgebraKind.OCTONION:
        raise PreconditionError("octonion automorphisms need an octonion algebra")
    if t.apply(algebra.unity) != algebra.unity:
        return False
    if not is_isometry(t, algebra.space, algebra.space):
        return False
    images = [t.column(j).raw for j in range(RANK)]
    basis = [Vector.basis(algebra.ring, RANK, i).raw for i in range(RANK)]
    for a in range(RANK):
        for b in range(RANK):
            if algebra.mult.apply_raw(images[a], images[b]) != t.apply_raw(algebra.mult.apply_raw(basis[a], basis[b])):
                return False
    return True


def j_triple(t: LinearMap) -> TripleMap:
    """t -> (t, t, t)."""
    return TripleMap(t, t, t)


def sl3_zorn_automorphism(ring: RingDescriptor, a: Sequence[Sequence[Raw]]) -> LinearMap:
    """[[a, x], [y, b]] -> [[a, A x], [A^-T y, b]] for det A = 1."""
    if len(a) != 3 or any(len(row) != 3 for row in a):
        raise DimensionMismatchError("SL3 generator must be 3x3")
    if matrix.determinant(ring, a) != ring.reduce(1):
        raise PreconditionError("matrix does not have determinant 1")
    inv_t = matrix.transpose(matrix.inverse(ring, a))
    rows = [[ring.reduce(0)] * RANK for _ in range(RANK)]
    rows[A][A] = ring.reduce(1)
    rows[B][B] = ring.reduce(1)
    for r in range(3):
        for c in range(3):
            rows[X[r]][X[c]] = ring.reduce(a[r][c])
            rows[Y[r]][Y[c]] = inv_t[r][c]
    t = LinearMap.from_raw(ring, rows)
    if not is_octonion_automorphism(zorn_octonion(ring), t):
        raise ValidationFailure("SL3 map is not a Zorn automorphism")
    return t


def random_zorn_automorphism(ring: RingDescriptor, stream: SampleStream) -> LinearMap:
    return sl3_zorn_automorphism(ring, random_sl3(ring, stream))


# Octonionification

def octonionify(M: CompositionOfForms, a: Vector, b: Vector) -> Tuple[CompositionAlgebra, TripleMap, TripleMap]:
    """Octonion algebra on C1 from norm-one points a in C3 and b in C2.

    f(x) = m(a, x), g(x) = m(x, b); x . y = m(g^-1 x, f^-1 y) with unity m(a, b).
    Returns the algebra, the isomorphism (Id, f, g) onto its composition and
    (Id, kappa f, kappa g) onto the composition of its para algebra.
    """
    ring = M.ring
    if M.c3.evaluate(a) != 1 or M.c2.evaluate(b) != 1:
        raise PreconditionError("octonionify needs q3(a) = q2(b) = 1")
    f = LinearMap.from_function(ring, RANK, lambda x: M.apply(a, x))
    g = LinearMap.from_function(ring, RANK, lambda x: M.apply(x, b))
    if not (is_isometry(f, M.c2, M.c1) and is_isometry(g, M.c3, M.c1)):
        raise ValidationFailure("f or g is not an isometry")
    f_inv, g_inv = f.inverse(), g.inverse()
    mult = M.m.transform(LinearMap.identity(ring, RANK), g_inv, f_inv)
    algebra = CompositionAlgebra(M.c1, mult, M.apply(a, b), AlgebraKind.OCTONION)
    validate_algebra(algebra)

    ident = LinearMap.identity(ring, RANK)
    iso = TripleMap(ident, f, g)
    target = CompositionOfForms(M.c1, M.c1, M.c1, mult)
    witness = morphism_defect(iso, M, target)
    if witness is not None:
        raise ValidationFailure("(Id, f, g) is not a morphism", witness)

    kappa = conjugation_map(algebra)
    para_iso = TripleMap(ident, kappa.compose(f), kappa.compose(g))
    para_algebra = para(algebra)
    witness = morphism_defect(para_iso, M, CompositionOfForms(M.c1, M.c1, M.c1, para_algebra.mult))
    if witness is not None:
        raise ValidationFailure("(Id, kappa f, kappa g) is not a morphism", witness)
    return algebra, iso, para_iso


def _sparse_candidates(ring: RingDescriptor) -> Iterator[Vector]:
    signs = (1,) if ring.characteristic == 2 else (1, -1)
    for i in range(RANK):
        for s in signs:
            yield Vector.basis(ring, RANK, i).scale(s)
    for i, j in itertools.combinations(range(RANK), 2):
        for s, t in itertools.product(signs, repeat=2):
            yield Vector.basis(ring, RANK, i).scale(s) + Vector.basis(ring, RANK, j).scale(t)


def _enumerate(ring: RingDescriptor, cap: int) -> Iterator[Vector]:
    # lexicographic in the coordinates, bounded by cap candidates
    for count, values in enumerate(itertools.product(range(ring.modulus), repeat=RANK)):
        if count >= cap:
            return
        yield Vector(ring, values)


def find_norm_one_point(q: QuadraticSpace, cap: int) -> Optional[Vector]:
    """First v with q(v) = 1: lexicographic over F_p, sparse candidates over Q and Z."""
    ring = q.ring
    candidates = _enumerate(ring, cap) if ring.kind is RingKind.PRIME_FIELD else _sparse_candidates(ring)
    for v in candidates:
        if q.evaluate_raw(v.raw) == ring.reduce(1):
            return v
    return None


def find_norm_one_points(M: CompositionOfForms, cap: Optional[int] = None) -> Optional[Tuple[Vector, Vector]]:
    """Points a in C3 and b in C2 with q3(a) = q2(b) = 1, or None."""
    cap = settings.NORM_SEARCH_CAP if cap is None else cap
    a = find_norm_one_point(M.c3, cap)
    b = find_norm_one_point(M.c2, cap)
    if a is None or b is None:
        logger.info("no norm-one points found within cap %d", cap)
        return None
    return a, b


def sampled_multiplicativity(algebra: CompositionAlgebra, samples: int, stream_factory) -> Tuple[int, Optional[dict]]:
    """Count of passing random pairs and the first failing pair."""
    ring = algebra.ring
    passed = 0
    for index in range(samples):
        stream = stream_factory(index)
        x = random_element(ring, RANK, stream)
        y = random_element(ring, RANK, stream)
        if algebra.norm(algebra.multiply(x, y)) == algebra.norm(x) * algebra.norm(y):
            passed += 1
        else:
            return passed, {"index": index, "x": x.to_strings(), "y": y.to_strings()}
    return passed, None
