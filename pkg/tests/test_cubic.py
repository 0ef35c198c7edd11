import pytest

from app.core.exceptions import NotAUnitError, NotInvertibleError, PreconditionError, ValidationFailure
from app.models.albert import ALBERT_RANK, e
from app.models.cubic import CubicNormStructure
from app.models.polynomial import Polynomial
from app.models.quadspace import LinearMap, Vector
from app.models.scalars import RingDescriptor
from app.services import albert_service, cubic_service
from app.services.sampling import SampleStream, random_element

F7 = RingDescriptor.prime_field(7)
Q = RingDescriptor.rationals()
Z = RingDescriptor.integers()


# ---------------------------------------------------------
# The split cubic R^3
# ---------------------------------------------------------

def test_split_cubic_operations(split_cubic):
    A = split_cubic(Q)
    x = A.element([1, 2, 3])
    y = A.element([4, 5, 6])
    assert A.norm(x) == 6
    assert A.adjoint(x) == A.element([6, 3, 2])
    assert A.u_op(x, A.one()) == A.element([1, 4, 9])
    assert A.circle(x, y) == A.element([8, 20, 36])
    assert A.jordan_product(x, y) == A.element([4, 10, 18])
    assert A.trace(x) == 6
    assert A.quadratic_trace(x) == 11


def test_split_cubic_passes_both_suites(split_cubic):
    A = split_cubic(Q)
    assert cubic_service.check_cns_axioms(A, 10, 0).verdict.value == "pass"
    assert A.cns_verified
    assert cubic_service.check_jordan_axioms(A, 10, 0).verdict.value == "pass"


def test_broken_adjoint_is_reported(split_cubic):
    A = split_cubic(Q)
    adjoint = list(A.adjoint_polys)
    adjoint[0] = adjoint[0] + Polynomial.from_indices(Q, 3, [((0, 0), 1)])
    broken = CubicNormStructure(Q, 3, A.basepoint, A.norm_poly, adjoint, A.trace_gram)
    report = cubic_service.check_cns_axioms(broken, 2, 0)
    assert report.verdict.value == "fail"
    assert report.check("basepoint").failed == 1
    assert report.check("adjoint_identity").failed == 1
    assert not broken.cns_verified


def test_jordan_product_needs_two_invertible(split_cubic):
    A = split_cubic(Z)
    with pytest.raises(NotAUnitError):
        A.jordan_product(A.one(), A.one())


def test_inverse(split_cubic):
    A = split_cubic(Q)
    p = A.element([2, 3, 1])
    assert A.inverse(p) == A.element(["1/2", "1/3", 1])
    assert A.u_op(p, A.inverse(p)) == p
    with pytest.raises(NotInvertibleError):
        A.inverse(A.element([1, 0, 1]))


def test_isotope_of_split_cubic(split_cubic):
    A = split_cubic(Q)
    p = A.element([2, "1/2", 1])
    Ap = cubic_service.isotope(A, p)
    assert Ap.basepoint == A.element(["1/2", 2, 1])
    assert Ap.norm_poly == A.norm_poly
    for index in range(5):
        stream = SampleStream(4, "isotope", index)
        x, y = random_element(Q, 3, stream), random_element(Q, 3, stream)
        assert Ap.u_op(x, y) == A.u_op(x, A.u_op(p, y))


def test_normalize_isotope(split_cubic):
    A = split_cubic(Q)
    p, lam = cubic_service.normalize_isotope(A, A.element([2, 1, 1]))
    assert lam == Q.element("1/2")
    assert A.norm(p) == 1
    with pytest.raises(NotInvertibleError):
        cubic_service.normalize_isotope(A, A.element([0, 1, 1]))


def test_isotope_needs_norm_one(split_cubic):
    A = split_cubic(Q)
    with pytest.raises(PreconditionError):
        cubic_service.isotope(A, A.element([2, 1, 1]))


# ---------------------------------------------------------
# H3 of the split octonions
# ---------------------------------------------------------

def test_unit_and_idempotents(h3_f7):
    A = h3_f7
    one = A.one()
    assert A.norm(one) == 1
    assert A.adjoint(one) == one
    e12 = e(F7, 1) + e(F7, 2)
    assert A.norm(e12) == 0
    assert A.adjoint(e12) == e(F7, 3)
    assert A.trace_bilinear(one, one) == 3
    assert A.quadratic_trace(one) == 3


def test_u_of_unit_is_identity(h3_f7):
    assert h3_f7.u_matrix(h3_f7.one()) == LinearMap.identity(F7, ALBERT_RANK)


def test_h3_passes_axiom_suites(h3_f7):
    assert cubic_service.check_cns_axioms(h3_f7, 5, 1).verdict.value == "pass"
    assert cubic_service.check_jordan_axioms(h3_f7, 5, 1).verdict.value == "pass"


def test_h3_over_rationals(h3_q):
    A = h3_q
    x = random_element(Q, ALBERT_RANK, SampleStream(8, "q", 0))
    assert A.adjoint(A.adjoint(x)) == x.scale(A.norm(x))
    assert A.norm(A.adjoint(x)) == A.norm(x) * A.norm(x)
    assert A.u_op(x, A.inverse(A.one())) == A.square(x)


def test_isotope_at_unit_is_unchanged(h3_f7):
    Ap = cubic_service.isotope(h3_f7, h3_f7.one())
    assert Ap.same_data(h3_f7)


def test_isotope_at_diagonal_point(h3_f7):
    A = h3_f7
    p = e(F7, 1).scale(2) + e(F7, 2).scale(4) + e(F7, 3)
    assert A.norm(p) == 1
    Ap = cubic_service.isotope(A, p)
    assert Ap.basepoint == e(F7, 1).scale(4) + e(F7, 2).scale(2) + e(F7, 3)
    assert Ap.norm_poly == A.norm_poly
    assert cubic_service.isotope_coherence_witness(A, Ap, p) is None


# ---------------------------------------------------------
# Norm isometries, automorphisms and isotopies
# ---------------------------------------------------------

def test_identity_membership(h3_f7):
    A = h3_f7
    ident = LinearMap.identity(F7, ALBERT_RANK)
    assert cubic_service.is_automorphism(A, ident)
    assert cubic_service.on_unit_sphere(A, A.one())
    assert cubic_service.sphere_point(A, ident) == A.one()
    assert cubic_service.verify_isotopy_iso(A, ident, A.one())


def test_scalar_maps(h3_f7):
    A = h3_f7
    ident = LinearMap.identity(F7, ALBERT_RANK)
    # 2^3 = 1 in F_7
    assert cubic_service.is_norm_isometry(A, ident.scale(2))
    assert not cubic_service.is_automorphism(A, ident.scale(2))
    assert not cubic_service.is_norm_isometry(A, ident.scale(3))
    with pytest.raises(PreconditionError):
        cubic_service.sphere_point(A, ident.scale(3))


def test_isotopy_example(h3_f7):
    A = h3_f7
    for index in range(2):
        phi, p, w = albert_service.isotopy_example(A, SampleStream(6, "example", index))
        assert A.norm(w) == 1
        assert cubic_service.on_unit_sphere(A, p)
        assert cubic_service.verify_isotopy_iso(A, phi, p)


def test_isotopy_needs_norm_one_point(h3_f7):
    A = h3_f7
    ident = LinearMap.identity(F7, ALBERT_RANK)
    with pytest.raises(PreconditionError):
        cubic_service.verify_isotopy_iso(A, ident, A.one().scale(3))


class CrossTermU:
    """Adds x3 x4 y0 b5 to U_x y; the change vanishes whenever x is a basis vector."""

    def __init__(self, inner):
        self.inner = inner

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def u_op(self, x, y):
        return self.inner.u_op(x, y) + self.inner.basis(5).scale(x.raw[3] * x.raw[4] * y.raw[0])


def test_isotope_coherence_checks_pairs_of_basis_vectors(h3_f7):
    A = h3_f7
    p = e(F7, 1).scale(2) + e(F7, 2).scale(4) + e(F7, 3)
    Ap = CrossTermU(cubic_service.isotope(A, p))
    assert cubic_service.isotope_coherence_witness(A, Ap, p) == {"x": [3, 4], "y": 0}


def test_isotopy_check_sees_pairs_of_basis_vectors(h3_f7, monkeypatch):
    A = h3_f7
    build = cubic_service.isotope
    monkeypatch.setattr(cubic_service, "isotope", lambda B, p: CrossTermU(build(B, p)))
    ident = LinearMap.identity(F7, ALBERT_RANK)
    witness = cubic_service.isotopy_iso_witness(A, ident, A.one())
    assert witness["x"] == [3, 4] and witness["y"] == 0
    assert not cubic_service.verify_isotopy_iso(A, ident, A.one())


def test_validate_structure_raises_on_failure(split_cubic):
    A = split_cubic(Q)
    broken = CubicNormStructure(Q, 3, Vector.of(Q, [1, 1, 2]), A.norm_poly, A.adjoint_polys, A.trace_gram)
    with pytest.raises(ValidationFailure) as info:
        cubic_service.validate_structure(broken)
    assert info.value.witness["identity"] == "N(1) = 1"
