"""Axiom suites, isotopes and membership tests for cubic norm structures."""
import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import NotInvertibleError, PreconditionError, ValidationFailure
from app.models.cubic import CubicNormStructure, IsotopeOrigin
from app.models.polynomial import Polynomial
from app.models.quadspace import LinearMap, Vector
from app.models.scalars import RingDescriptor, RingKind, Scalar
from app.schemas.report import CheckResult, Report
from app.services.sampling import SampleStream, random_element

logger = logging.getLogger(__name__)


def _integral_view(polys: Sequence[Polynomial]) -> List[Polynomial]:
    """Rational polynomials with integral coefficients, moved to Z for speed."""
    if not polys or polys[0].ring.kind is not RingKind.RATIONALS:
        return list(polys)
    if any(c.denominator != 1 for p in polys for c in p.terms.values()):
        return list(polys)
    z = RingDescriptor.integers()
    return [Polynomial(z, p.nvars, {m: c.numerator for m, c in p.terms.items()}, reduced=True) for p in polys]


def _poly_witness(left: Polynomial, right: Polynomial, **extra) -> Optional[dict]:
    diff = left.first_difference(right)
    if diff is None:
        return None
    diff.update(extra)
    return diff


# Coefficient-level identities

def basepoint_witness(A: CubicNormStructure) -> Optional[dict]:
    one = A.basepoint
    if A.norm(one) != 1:
        return {"identity": "N(1) = 1", "value": str(A.norm(one))}
    if A.adjoint(one) != one:
        return {"identity": "1^# = 1", "value": A.adjoint(one).to_strings()}
    return None


def _adjoint_identity_witness(A: CubicNormStructure) -> Optional[dict]:
    """x^## = N(x) x as an identity of quartic maps."""
    if A.origin is not None:
        return _adjoint_identity_via_parent(A)
    polys = _integral_view([A.norm_poly, *A.adjoint_polys])
    norm, adj = polys[0], polys[1:]
    for k, pk in enumerate(adj):
        left = pk.compose(adj)
        right = norm * Polynomial.variable(norm.ring, A.rank, k)
        witness = _poly_witness(left, right, coordinate=k)
        if witness is not None:
            return witness
    return None


def _norm_of_adjoint_witness(A: CubicNormStructure) -> Optional[dict]:
    """N(x^#) = N(x)^2 as an identity of sextic forms."""
    if A.origin is not None:
        return _norm_of_adjoint_via_parent(A)
    polys = _integral_view([A.norm_poly, *A.adjoint_polys])
    norm, adj = polys[0], polys[1:]
    return _poly_witness(norm.compose(adj), norm * norm)


def _ensure_parent(A: CubicNormStructure) -> Optional[dict]:
    parent = A.origin.parent
    if not parent.cns_verified:
        report = check_cns_axioms(parent, 0, 0)
        if report.verdict.value == "fail":
            return {"reason": "parent structure fails its identities"}
    return None


def _adjoint_identity_via_parent(A: CubicNormStructure) -> Optional[dict]:
    # x^#'#' = L (L x^#)^# = L M x^## = N(x) L M x, given #oL = Mo# and LM = Id
    origin = A.origin
    witness = _ensure_parent(A)
    if witness is not None:
        return witness
    parent, shift, unshift = origin.parent, origin.shift, origin.unshift
    if shift.compose(unshift) != LinearMap.identity(A.ring, A.rank):
        return {"reason": "shift o unshift != Id"}
    for k, poly in enumerate(A.adjoint_polys):
        expected = Polynomial(A.ring, A.rank)
        for i, c in enumerate(shift.rows[k]):
            if c:
                expected = expected + parent.adjoint_polys[i].scale(c)
        witness = _poly_witness(poly, expected, coordinate=k, reason="adjoint is not shift o parent adjoint")
        if witness is not None:
            return witness
    subs = shift.as_polynomials()
    for k, pk in enumerate(parent.adjoint_polys):
        left = pk.compose(subs)
        right = Polynomial(A.ring, A.rank)
        for i, c in enumerate(unshift.rows[k]):
            if c:
                right = right + parent.adjoint_polys[i].scale(c)
        witness = _poly_witness(left, right, coordinate=k, reason="(L x)^# != M x^#")
        if witness is not None:
            return witness
    return None


def _norm_of_adjoint_via_parent(A: CubicNormStructure) -> Optional[dict]:
    # N(L x^#) = N(x^#) = N(x)^2, given N o L = N
    witness = _ensure_parent(A)
    if witness is not None:
        return witness
    parent = A.origin.parent
    witness = _poly_witness(A.norm_poly, parent.norm_poly, reason="norm differs from parent norm")
    if witness is not None:
        return witness
    return _poly_witness(parent.norm_poly.compose(A.origin.shift.as_polynomials()), parent.norm_poly, reason="N o L != N")


def _trace_derivative_witness(A: CubicNormStructure) -> Optional[dict]:
    """T(x^#, b_i) equals the derivative of N in direction b_i."""
    for i in range(A.rank):
        acc = {}
        for k, poly in enumerate(A.adjoint_polys):
            g = A.trace_gram[k][i]
            if g:
                for m, c in poly.terms.items():
                    acc[m] = acc.get(m, 0) + g * c
        left = Polynomial(A.ring, A.rank, acc)
        witness = _poly_witness(left, A.norm_poly.derivative(i), direction=i)
        if witness is not None:
            return witness
    return None


def check_cns_axioms(A: CubicNormStructure, sample_count: int, seed: int) -> Report:
    """Adjoint and norm compatibilities on coefficient tables, plus sampled U-operator consistency."""
    report = Report(suite="cns-axioms", config={"samples": sample_count, "seed": seed, "ring": str(A.ring)})
    for name, witness_of in (
        ("basepoint", basepoint_witness),
        ("adjoint_identity", _adjoint_identity_witness),
        ("norm_of_adjoint", _norm_of_adjoint_witness),
        ("trace_derivative", _trace_derivative_witness),
    ):
        witness = witness_of(A)
        report.add(CheckResult(name=name)).record(witness is None, witness)

    consistency = report.add(CheckResult(name="u_consistency"))
    two = A.ring.reduce(2)
    for index in range(sample_count):
        stream = SampleStream(seed, "cns", index)
        x, y, z = (random_element(A.ring, A.rank, stream) for _ in range(3))
        ok = A.triple_product(x, y, x) == A.u_op(x, y).scale(two)
        if ok:
            lin = A.u_op(x + z, y) - A.u_op(x, y) - A.u_op(z, y)
            ok = lin == A.triple_product(x, y, z)
        consistency.record(ok, {"x": x.to_strings(), "y": y.to_strings(), "z": z.to_strings()}, index)

    if report.verdict.value == "pass":
        A.cns_verified = True
    else:
        logger.warning("cubic norm structure over %s fails %s", A.ring, [c.name for c in report.checks if c.failed])
    return report


def check_jordan_axioms(A: CubicNormStructure, sample_count: int, seed: int) -> Report:
    """U_1 = Id on the basis; U_{U_x y} = U_x U_y U_x and U_x{y x z} = {x y U_x z} on samples."""
    report = Report(suite="jordan-axioms", config={"samples": sample_count, "seed": seed, "ring": str(A.ring)})
    unit = report.add(CheckResult(name="u_one_identity"))
    for j in range(A.rank):
        b = A.basis(j)
        got = A.u_op(A.basepoint, b)
        unit.record(got == b, {"basis": j, "got": got.to_strings()}, j)

    fundamental = report.add(CheckResult(name="fundamental_formula"))
    mixed = report.add(CheckResult(name="u_triple_identity"))
    for index in range(sample_count):
        stream = SampleStream(seed, "jordan", index)
        x, y, z = (random_element(A.ring, A.rank, stream) for _ in range(3))
        witness = {"x": x.to_strings(), "y": y.to_strings(), "z": z.to_strings()}
        ux_z = A.u_op(x, z)
        left = A.u_op(A.u_op(x, y), z)
        right = A.u_op(x, A.u_op(y, ux_z))
        fundamental.record(left == right, witness, index)
        left = A.u_op(x, A.triple_product(y, x, z))
        right = A.triple_product(x, y, ux_z)
        mixed.record(left == right, witness, index)
    return report


def validate_structure(A: CubicNormStructure, samples: Optional[int] = None, seed: Optional[int] = None) -> None:
    """Raise ValidationFailure unless both axiom suites pass."""
    samples = settings.VALIDATION_SAMPLES if samples is None else samples
    seed = settings.VALIDATION_SEED if seed is None else seed
    for report in (check_cns_axioms(A, samples, seed), check_jordan_axioms(A, samples, seed)):
        for check in report.checks:
            if check.failed:
                raise ValidationFailure(f"{report.suite}: {check.name} fails", check.counterexample)


# Isotopes

def normalize_isotope(A: CubicNormStructure, p: Vector) -> Tuple[Vector, Scalar]:
    """(lambda U_p p, lambda) with lambda = N(p)^-1, so the new point has norm 1."""
    n = A.norm(p)
    if not n.is_unit():
        raise NotInvertibleError(f"N(p) = {n} is not a unit")
    lam = n.invert()
    p_new = A.u_op(p, p).scale(lam)
    if A.norm(p_new) != 1:
        raise ValidationFailure("normalized point does not have norm 1", {"p": p_new.to_strings()})
    return p_new, lam


def _quadratic_points(A: CubicNormStructure) -> Iterator[Tuple[List[int], Vector]]:
    """b_a and b_a + b_b for a < b; a map quadratic in x is fixed by its values there."""
    basis = [A.basis(j) for j in range(A.rank)]
    for a, x in enumerate(basis):
        yield [a], x
    for a, b in itertools.combinations(range(A.rank), 2):
        yield [a, b], basis[a] + basis[b]


def isotope_coherence_witness(A: CubicNormStructure, Ap: CubicNormStructure, p: Vector) -> Optional[dict]:
    """First (x, b_j) where the isotope's U-operator differs from U_x U_p."""
    basis = [A.basis(j) for j in range(A.rank)]
    up_cols = [A.u_op(p, b) for b in basis]
    for label, x in _quadratic_points(A):
        for j in range(A.rank):
            if Ap.u_op(x, basis[j]) != A.u_op(x, up_cols[j]):
                return {"x": label, "y": j}
    return None


def isotope(A: CubicNormStructure, p: Vector, validate: bool = True) -> CubicNormStructure:
    """The isotope with base point p^-1, the same norm and adjoint U_{p^-1} o #."""
    if A.norm(p) != 1:
        raise PreconditionError("isotope needs N(p) = 1; normalize the point first")
    p_inv = A.inverse(p)
    shift = A.u_matrix(p_inv)
    unshift = A.u_matrix(A.adjoint(p_inv))
    adjoint = []
    for row in shift.rows:
        acc = {}
        for k, c in enumerate(row):
            if c:
                for m, v in A.adjoint_polys[k].terms.items():
                    acc[m] = acc.get(m, 0) + c * v
        adjoint.append(Polynomial(A.ring, A.rank, acc))
    up = A.u_matrix(p)
    gram = [
        [sum(up.rows[k][a] * A.trace_gram[k][b] for k in range(A.rank)) for b in range(A.rank)]
        for a in range(A.rank)
    ]
    Ap = CubicNormStructure(
        A.ring, A.rank, p_inv, A.norm_poly, adjoint, gram,
        origin=IsotopeOrigin(parent=A, p=p, shift=shift, unshift=unshift),
    )
    if validate:
        validate_structure(Ap)
        witness = isotope_coherence_witness(A, Ap, p)
        if witness is not None:
            raise ValidationFailure("isotope U-operator differs from U_x U_p", witness)
    logger.debug("built isotope over %s", A.ring)
    return Ap


# Membership tests

def norm_isometry_witness(A: CubicNormStructure, phi: LinearMap) -> Optional[dict]:
    if phi.n_in != A.rank or phi.n_out != A.rank:
        return {"reason": "dimension mismatch"}
    if not phi.is_invertible():
        return {"reason": "not invertible"}
    polys = _integral_view([A.norm_poly, *phi.as_polynomials()])
    return _poly_witness(polys[0].compose(polys[1:]), polys[0], reason="N o phi != N")


def is_norm_isometry(A: CubicNormStructure, phi: LinearMap) -> bool:
    return norm_isometry_witness(A, phi) is None


def is_automorphism(A: CubicNormStructure, phi: LinearMap) -> bool:
    if phi.n_in != A.rank or phi.n_out != A.rank:
        return False
    return phi.apply(A.basepoint) == A.basepoint and is_norm_isometry(A, phi)


def on_unit_sphere(A: CubicNormStructure, x: Vector) -> bool:
    return A.norm(x) == 1


def sphere_point(A: CubicNormStructure, phi: LinearMap) -> Vector:
    """phi(1)^-1 for a norm isometry phi; it lies on the unit sphere."""
    if not is_norm_isometry(A, phi):
        raise PreconditionError("sphere_point needs a norm isometry")
    return A.inverse(phi.apply(A.basepoint))


def isotopy_iso_witness(A: CubicNormStructure, phi: LinearMap, p: Vector) -> Optional[dict]:
    if A.norm(p) != 1:
        raise PreconditionError("verify_isotopy_iso needs N(p) = 1")
    witness = norm_isometry_witness(A, phi)
    if witness is not None:
        return witness
    Ap = isotope(A, p)
    if phi.apply(A.basepoint) != Ap.basepoint:
        return {"reason": "phi(1) != p^-1", "got": phi.apply(A.basepoint).to_strings()}
    basis = [A.basis(j) for j in range(A.rank)]
    images = [phi.apply(b) for b in basis]
    for label, x in _quadratic_points(A):
        image = phi.apply(x)
        for j in range(A.rank):
            if phi.apply(A.u_op(x, basis[j])) != Ap.u_op(image, images[j]):
                return {"x": label, "y": j, "reason": "phi(U_x y) != U'_{phi x} phi y"}
    return None


def verify_isotopy_iso(A: CubicNormStructure, phi: LinearMap, p: Vector) -> bool:
    return isotopy_iso_witness(A, phi, p) is None
