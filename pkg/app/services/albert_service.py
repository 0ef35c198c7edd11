"""H(M, Gamma), frames, Peirce spaces, deformations and transport.

Peirce and rank computations need field scalars, so structures over Z are
lifted to Q first; everything they return then lives over Q.
"""
import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import (
    NotAUnitError,
    PreconditionError,
    RingMismatchError,
    SearchExhaustedError,
    UnsupportedRingError,
    ValidationFailure,
)
from app.models import matrix
from app.models.albert import (
    ALBERT_RANK,
    CYCLIC,
    Frame,
    Gamma,
    alpha_index,
    block_offset,
    block_range,
    e,
    embed,
)
from app.models.composition import RANK, AlgebraKind, BilinearMap, CompositionAlgebra, CompositionOfForms, TripleMap
from app.models.cubic import CubicNormStructure
from app.models.polynomial import Polynomial, encode
from app.models.quadspace import LinearMap, QuadraticSpace, Vector, kernel_basis
from app.models.scalars import Raw, RingDescriptor
from app.services import composition_service, cubic_service
from app.services.sampling import SampleStream, random_raw, random_sparse, random_unit_raw

logger = logging.getLogger(__name__)


# Construction

def _slot(i: int, k: int) -> int:
    return block_offset(i) + k


def _companion_maps(M: CompositionOfForms) -> Dict[int, BilinearMap]:
    m2, m3 = composition_service.companions(M)
    return {1: M.m, 2: m2, 3: m3}


def _trilinear_terms(M: CompositionOfForms, g123: Raw) -> Dict[int, Raw]:
    """g1 g2 g3 <m(u3, u2), u1>_1 as packed monomials."""
    gram1 = M.c1.gram_raw()
    terms: Dict[int, Raw] = {}
    for (a, b), entries in M.m.table.items():
        for c in range(RANK):
            coeff = sum(v * gram1[k][c] for k, v in entries)
            if coeff:
                m = encode([_slot(3, a), _slot(2, b), _slot(1, c)])
                terms[m] = terms.get(m, 0) + g123 * coeff
    return terms


def _diagonal_terms(forms: Sequence[QuadraticSpace], gamma: Gamma) -> Dict[int, Raw]:
    """-sum g_j g_l alpha_i q_i(u_i) as packed monomials."""
    terms: Dict[int, Raw] = {}
    for i, j, l in CYCLIC:
        gjgl = (gamma[j] * gamma[l]).value
        for a, b, c in forms[i - 1].terms():
            m = encode([alpha_index(i), _slot(i, a), _slot(i, b)])
            terms[m] = terms.get(m, 0) - gjgl * c
    return terms


def _hermitian_norm(M: CompositionOfForms, gamma: Gamma, trilinear: Dict[int, Raw]) -> Polynomial:
    terms = dict(trilinear)
    terms[encode([0, 1, 2])] = 1
    for m, c in _diagonal_terms(M.forms, gamma).items():
        terms[m] = terms.get(m, 0) + c
    return Polynomial(M.ring, ALBERT_RANK, terms)


def _hermitian_adjoint(M: CompositionOfForms, gamma: Gamma) -> List[Polynomial]:
    ring = M.ring
    maps = _companion_maps(M)
    coords: List[Dict[int, Raw]] = [{} for _ in range(ALBERT_RANK)]
    for i, j, l in CYCLIC:
        # e_i coordinate: alpha_j alpha_l - g_j g_l q_i(u_i)
        target = coords[alpha_index(i)]
        target[encode([alpha_index(j), alpha_index(l)])] = 1
        gjgl = (gamma[j] * gamma[l]).value
        for a, b, c in M.forms[i - 1].terms():
            m = encode([_slot(i, a), _slot(i, b)])
            target[m] = target.get(m, 0) - gjgl * c
        # slot i: g_i m_i(u_l, u_j) - alpha_i u_i
        gi = gamma[i].value
        for (a, b), entries in maps[i].table.items():
            m = encode([_slot(l, a), _slot(j, b)])
            for k, v in entries:
                slot = coords[_slot(i, k)]
                slot[m] = slot.get(m, 0) + gi * v
        for k in range(RANK):
            slot = coords[_slot(i, k)]
            m = encode([alpha_index(i), _slot(i, k)])
            slot[m] = slot.get(m, 0) - 1
    return [Polynomial(ring, ALBERT_RANK, t) for t in coords]


def _hermitian_trace(M: CompositionOfForms, gamma: Gamma) -> List[List[Raw]]:
    ring = M.ring
    gram = [[ring.reduce(0)] * ALBERT_RANK for _ in range(ALBERT_RANK)]
    for i in (1, 2, 3):
        gram[alpha_index(i)][alpha_index(i)] = ring.reduce(1)
    for i, j, l in CYCLIC:
        gjgl = (gamma[j] * gamma[l]).value
        block = M.forms[i - 1].gram_raw()
        for a in range(RANK):
            for b in range(RANK):
                gram[_slot(i, a)][_slot(i, b)] = ring.reduce(gjgl * block[a][b])
    return gram


def hermitian_algebra(M: CompositionOfForms, gamma: Gamma, validate: bool = True) -> CubicNormStructure:
    """The rank-27 cubic norm structure H(M, Gamma) with base point e1 + e2 + e3."""
    if gamma.ring != M.ring:
        raise RingMismatchError(f"gamma over {gamma.ring}, composition over {M.ring}")
    if not gamma.is_valid():
        raise NotAUnitError(f"g1 g2 g3 = {gamma.product()} is not a unit in {M.ring}")
    ring = M.ring
    norm = _hermitian_norm(M, gamma, _trilinear_terms(M, gamma.product().value))
    adjoint = _hermitian_adjoint(M, gamma)
    basepoint = e(ring, 1) + e(ring, 2) + e(ring, 3)
    A = CubicNormStructure(ring, ALBERT_RANK, basepoint, norm, adjoint, _hermitian_trace(M, gamma))
    if validate:
        cubic_service.validate_structure(A)
    logger.debug("built H(M, %s) over %s", gamma, ring)
    return A


def delta_norm(C: CompositionAlgebra, gamma: Gamma) -> Polynomial:
    """alpha1 alpha2 alpha3 + g1 g2 g3 Delta(u1, u2, u3) - sum g_j g_l alpha_i q(u_i)."""
    ring = C.ring
    basis = [Vector.basis(ring, RANK, i) for i in range(RANK)]
    g123 = gamma.product().value
    terms: Dict[int, Raw] = {encode([0, 1, 2]): 1}
    for a, b, c in itertools.product(range(RANK), repeat=3):
        value = composition_service.delta(C, basis[c], basis[b], basis[a]).value
        if value:
            m = encode([_slot(1, c), _slot(2, b), _slot(3, a)])
            terms[m] = terms.get(m, 0) + g123 * value
    for m, coeff in _diagonal_terms((C.space,) * 3, gamma).items():
        terms[m] = terms.get(m, 0) + coeff
    return Polynomial(ring, ALBERT_RANK, terms)


def h3(C: CompositionAlgebra, gamma: Gamma) -> CubicNormStructure:
    """H3(C, Gamma) via the composition of the para algebra."""
    if C.kind is AlgebraKind.OCTONION:
        C = composition_service.para(C)
    elif C.kind is not AlgebraKind.PARA:
        raise PreconditionError("h3 needs an octonion or para-octonion algebra")
    witness = composition_service.symmetry_defect(C)
    if witness is not None:
        raise ValidationFailure("algebra is not symmetric", witness)
    A = hermitian_algebra(composition_service.composition_of(C), gamma)
    witness = delta_norm(C, gamma).first_difference(A.norm_poly)
    if witness is not None:
        raise ValidationFailure("Delta norm and composition norm disagree", witness)
    return A


def iota(t: TripleMap) -> LinearMap:
    """sum alpha_i e_i + sum u_i[jl] -> sum alpha_i e_i + sum t_i(u_i)[jl]."""
    ring = t.ring
    rows = matrix.identity(ring, ALBERT_RANK)
    for i, ti in enumerate(t.maps, start=1):
        for a in range(RANK):
            for b in range(RANK):
                rows[_slot(i, a)][_slot(i, b)] = ti.rows[a][b]
    return LinearMap.from_raw(ring, rows)


def stabiliser_triple(A: CubicNormStructure, phi: LinearMap) -> TripleMap:
    """Blocks of an automorphism fixing e1, e2 and e3."""
    ring = A.ring
    for i in (1, 2, 3):
        if phi.apply(e(ring, i)) != e(ring, i):
            raise PreconditionError(f"map does not fix e{i}")
    if not cubic_service.is_automorphism(A, phi):
        raise PreconditionError("map is not an automorphism")
    blocks = []
    for i in (1, 2, 3):
        inside = block_range(i)
        for col in inside:
            if any(phi.rows[r][col] for r in range(ALBERT_RANK) if r not in inside):
                raise ValidationFailure("automorphism fixing the frame is not block diagonal", {"column": col})
        blocks.append(LinearMap.from_raw(ring, [[phi.rows[r][c] for c in inside] for r in inside]))
    return TripleMap(*blocks)


# Frames and Peirce spaces

def field_view(A: CubicNormStructure) -> CubicNormStructure:
    return A.base_change(A.ring.fraction_field())


def _lift(v: Vector, ring: RingDescriptor) -> Vector:
    return v.base_change(ring)


def _circle_minus_identity(A: CubicNormStructure, c: Vector) -> List[List[Raw]]:
    """Matrix rows of x -> c o x - x."""
    ring = A.ring
    one = ring.reduce(1)
    columns = [A.circle(c, A.basis(j)).raw for j in range(A.rank)]
    return [[ring.reduce(columns[j][r] - (one if r == j else 0)) for j in range(A.rank)] for r in range(A.rank)]


def is_frame(A: CubicNormStructure, c1: Vector, c2: Vector, c3: Vector) -> bool:
    F = field_view(A)
    cs = [_lift(c, F.ring) for c in (c1, c2, c3)]
    if cs[0] + cs[1] + cs[2] != F.basepoint:
        return False
    zero = F.zero()
    for i, ci in enumerate(cs):
        if F.u_op(ci, F.basepoint) != ci:
            return False
        for j, cj in enumerate(cs):
            if F.u_op(ci, cj) != (cj if i == j else zero):
                return False
        if matrix.rank(F.ring, F.u_matrix(ci).rows) != 1:
            return False
    return True


def is_frame_of(A: CubicNormStructure, frame: Frame) -> bool:
    return is_frame(A, *frame)


def peirce_one(A: CubicNormStructure, c: Vector) -> List[Vector]:
    """Basis of A_1(c) = {x : c o x = x}."""
    F = field_view(A)
    rows = _circle_minus_identity(F, _lift(c, F.ring))
    return kernel_basis(LinearMap.from_raw(F.ring, rows))


def coordinate_spaces(A: CubicNormStructure, frame: Frame) -> Tuple[List[Vector], List[Vector], List[Vector]]:
    """Bases of C_1, C_2, C_3 where C_l = A_1(c_i) meet A_1(c_j) for cyclic (i, j, l)."""
    F = field_view(A)
    cs = [_lift(c, F.ring) for c in frame]
    spaces: Dict[int, List[Vector]] = {}
    for i, j, l in CYCLIC:
        rows = _circle_minus_identity(F, cs[i - 1]) + _circle_minus_identity(F, cs[j - 1])
        basis = kernel_basis(LinearMap.from_raw(F.ring, rows))
        if len(basis) != RANK:
            raise ValidationFailure(f"coordinate space C{l} has dimension {len(basis)}", {"space": l, "dimension": len(basis)})
        spaces[l] = basis
    return spaces[1], spaces[2], spaces[3]


def _coordinates(basis: Sequence[Vector], v: Vector) -> Optional[List[Raw]]:
    """Coefficients of v in `basis`, or None when v lies outside the span."""
    ring = v.ring
    rows = [[b.raw[r] for b in basis] for r in range(len(v))]
    return matrix.solve(ring, rows, v.raw)


def _restricted_form(F: CubicNormStructure, basis: Sequence[Vector]) -> QuadraticSpace:
    """x -> -S(x) in the coordinates of `basis`."""
    ring = F.ring
    values = [F.quadratic_trace(v).value for v in basis]
    terms = [(a, a, -values[a]) for a in range(len(basis))]
    for a, b in itertools.combinations(range(len(basis)), 2):
        polar = F.quadratic_trace(basis[a] + basis[b]).value - values[a] - values[b]
        terms.append((a, b, -polar))
    return QuadraticSpace.from_terms(ring, len(basis), [(a, b, ring.reduce(c)) for a, b, c in terms])


def deform(A: CubicNormStructure, frame: Frame) -> CompositionOfForms:
    """The composition of forms carried by the coordinate spaces of a frame."""
    F = field_view(A)
    c1, c2, c3 = coordinate_spaces(A, frame)
    forms = [_restricted_form(F, c) for c in (c1, c2, c3)]

    def product(x: Vector, y: Vector) -> Vector:
        a, b = x.support()[0], y.support()[0]
        image = F.circle(c3[a], c2[b])
        coords = _coordinates(c1, image)
        if coords is None:
            raise ValidationFailure("circle product leaves C1", {"basis": [a, b]})
        return Vector(F.ring, coords)

    m = BilinearMap.from_function(F.ring, RANK, product)
    M = CompositionOfForms(*forms, m)
    composition_service.validate_composition(M)
    logger.debug("deformed composition over %s", F.ring)
    return M


def s_multiplicativity_defect(F: CubicNormStructure, spaces: Sequence[Sequence[Vector]], x: Vector, y: Vector) -> Optional[dict]:
    """Witness against x o y in C1 with S(x o y) = -S(x) S(y), for x in C3 and y in C2."""
    xy = F.circle(x, y)
    if _coordinates(spaces[0], xy) is None:
        return {"reason": "x o y outside C1", "x": x.to_strings(), "y": y.to_strings()}
    if F.quadratic_trace(xy) != -(F.quadratic_trace(x) * F.quadratic_trace(y)):
        return {"reason": "S(x o y) != -S(x) S(y)", "x": x.to_strings(), "y": y.to_strings()}
    return None


def random_combination(ring: RingDescriptor, basis: Sequence[Vector], stream: SampleStream) -> Vector:
    total = Vector.zero(ring, len(basis[0]))
    for b in basis:
        total = total + b.scale(ring.reduce(random_raw(ring, stream)))
    return total


# Frame moving and transport

def frame_mover(A: CubicNormStructure, seed: int, max_tries: Optional[int] = None) -> Tuple[Vector, LinearMap]:
    """Seeded search for w = 1 - 2d with U_w an automorphism moving the distinguished frame.

    d = c + e3 where c = a e1 + b e2 + u[12] is a rank-one idempotent; a + b = 1
    and a b = g1 g2 q3(u), so a is a root of a^2 - a + g1 g2 q3(u). Only H(M, Gamma)
    in its standard coordinates is supported.
    """
    ring = A.ring
    if not ring.is_unit_raw(ring.reduce(2)):
        raise UnsupportedRingError(f"frame moving needs 2 to be a unit in {ring}")
    max_tries = settings.FRAME_MOVER_TRIES if max_tries is None else max_tries
    half = ring.invert_raw(ring.reduce(2))
    scaled_q3 = _u3_form(A)
    for attempt in range(max_tries):
        stream = SampleStream(seed, "frame-mover", attempt)
        u = random_sparse(ring, RANK, stream, stream.integer(1, 2))
        k = scaled_q3.evaluate_raw(u.raw)
        root = ring.sqrt_raw(ring.reduce(1 - 4 * k))
        if root is None:
            continue
        a = ring.reduce((1 + root) * half)
        c = e(ring, 1).scale(a) + e(ring, 2).scale(ring.reduce(1 - a)) + embed(ring, 3, u)
        if A.square(c) != c:
            continue
        w = A.basepoint - (c + e(ring, 3)).scale(2)
        if A.norm(w) != 1 or A.square(w) != A.basepoint:
            continue
        phi = A.u_matrix(w)
        if not cubic_service.is_automorphism(A, phi):
            continue
        logger.debug("frame mover found after %d attempts", attempt + 1)
        return w, phi
    raise SearchExhaustedError(f"no frame mover within {max_tries} attempts")


def _u3_form(A: CubicNormStructure) -> QuadraticSpace:
    """g1 g2 q3 read back from the adjoint: the e3 coordinate of u3[12]^# is -g1 g2 q3(u3)."""
    ring = A.ring
    poly = A.adjoint_polys[alpha_index(3)]
    offset = block_offset(3)
    terms = []
    for indices, coeff in poly.monomials():
        if all(v in block_range(3) for v in indices):
            terms.append((indices[0] - offset, indices[-1] - offset, ring.reduce(-coeff.value)))
    return QuadraticSpace.from_terms(ring, RANK, terms)


def _require_automorphism(A: CubicNormStructure, phi: LinearMap) -> LinearMap:
    """phi over the field view of A, once it is known to fix 1 and preserve N."""
    F = field_view(A)
    phi_f = phi.base_change(F.ring)
    if not cubic_service.is_automorphism(F, phi_f):
        raise PreconditionError("phi is not an automorphism of the algebra")
    return phi_f


def frame_image(A: CubicNormStructure, phi: LinearMap, frame: Frame) -> Frame:
    _require_automorphism(A, phi)
    image = frame.image(phi)
    if not is_frame_of(A, image):
        raise ValidationFailure("image of the frame is not a frame")
    return image


def transport(A: CubicNormStructure, phi: LinearMap, source: Frame, target: Frame) -> TripleMap:
    """Restrictions of phi to C_k(source) -> C_k(target), in the computed bases."""
    if source.image(phi) != target:
        raise PreconditionError("phi does not map the source frame onto the target frame")
    phi_f = _require_automorphism(A, phi)
    F = field_view(A)
    src = coordinate_spaces(A, source)
    dst = coordinate_spaces(A, target)
    maps = []
    for k, (b_src, b_dst) in enumerate(zip(src, dst), start=1):
        columns = []
        for v in b_src:
            coords = _coordinates(b_dst, phi_f.apply(v))
            if coords is None:
                raise ValidationFailure(f"phi does not map C{k} onto C{k}")
            columns.append(Vector(F.ring, coords))
        maps.append(LinearMap.from_columns(F.ring, columns))
    t = TripleMap(*maps)
    witness = composition_service.morphism_defect(t, deform(A, source), deform(A, target))
    if witness is not None:
        raise ValidationFailure("transported triple is not a morphism", witness)
    return t


# Isotopy examples

def _isotropic_u3_index(A: CubicNormStructure) -> Optional[int]:
    q3 = _u3_form(A)
    for k in range(RANK):
        if q3.coeffs[k][k] == 0:
            return k
    return None


def isotopy_example(A: CubicNormStructure, stream: SampleStream) -> Tuple[LinearMap, Vector, Vector]:
    """(U_w, p, w) with N(w) = 1, so U_w maps A onto its isotope at p = w^-2."""
    ring = A.ring
    k = _isotropic_u3_index(A)
    if k is None:
        raise PreconditionError("u3 block has no isotropic basis vector")
    a1 = ring.reduce(random_unit_raw(ring, stream))
    a2 = ring.reduce(random_unit_raw(ring, stream))
    a3 = ring.invert_raw(ring.reduce(a1 * a2))
    s = ring.reduce(random_unit_raw(ring, stream))
    w = (e(ring, 1).scale(a1) + e(ring, 2).scale(a2) + e(ring, 3).scale(a3)
         + embed(ring, 3, Vector.basis(ring, RANK, k).scale(s)))
    if A.norm(w) != 1:
        raise ValidationFailure("isotopy example point does not have norm 1", {"w": w.to_strings()})
    p = A.inverse(A.square(w))
    return A.u_matrix(w), p, w


def sparse_unit_point(A: CubicNormStructure, stream: SampleStream) -> Vector:
    """Invertible point supported on the diagonal and one isotropic u3 coordinate."""
    ring = A.ring
    k = _isotropic_u3_index(A)
    diag = [ring.reduce(random_unit_raw(ring, stream)) for _ in range(3)]
    p = sum((e(ring, i + 1).scale(d) for i, d in enumerate(diag)), A.zero())
    if k is not None:
        p = p + embed(ring, 3, Vector.basis(ring, RANK, k).scale(ring.reduce(random_unit_raw(ring, stream))))
    return p
