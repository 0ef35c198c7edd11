import pytest

from app.core.exceptions import NotAUnitError, PreconditionError, ValidationFailure
from app.models.albert import Gamma
from app.models.composition import RANK, AlgebraKind, CompositionAlgebra, CompositionOfForms, TripleMap
from app.models.quadspace import LinearMap, QuadraticSpace, Vector
from app.models.scalars import RingDescriptor
from app.services import composition_service
from app.services.sampling import SampleStream, random_element

F2 = RingDescriptor.prime_field(2)
F7 = RingDescriptor.prime_field(7)
Q = RingDescriptor.rationals()
Z = RingDescriptor.integers()


# ---------------------------------------------------------
# Zorn vector matrices
# ---------------------------------------------------------

@pytest.mark.parametrize("ring", [F2, F7, Q, Z])
def test_zorn_octonions_validate(ring):
    O = composition_service.zorn_octonion(ring)
    assert O.kind is AlgebraKind.OCTONION
    assert O.unity.to_strings() == ["1", "1", "0", "0", "0", "0", "0", "0"]
    assert O.norm(O.unity) == 1
    assert composition_service.unitality_defect(O) is None
    assert composition_service.multiplicativity_defect(O.space, O.space, O.space, O.mult) is None


def test_zorn_exhaustive_over_f2():
    assert composition_service.exhaustive_multiplicativity(composition_service.zorn_octonion(F2)) is None


def test_exhaustive_refuses_large_fields():
    with pytest.raises(PreconditionError):
        composition_service.exhaustive_multiplicativity(composition_service.zorn_octonion(F7))


def test_zorn_sampled_multiplicativity():
    O = composition_service.zorn_octonion(Q)
    passed, witness = composition_service.sampled_multiplicativity(O, 20, lambda i: SampleStream(3, "zorn", i))
    assert passed == 20
    assert witness is None


def test_perturbed_zorn_product_is_caught():
    O = composition_service.zorn_octonion(F7)
    broken = CompositionAlgebra(O.space, O.mult.perturbed(0, 0, 0), O.unity, AlgebraKind.OCTONION)
    assert composition_service.multiplicativity_defect(broken.space, broken.space, broken.space, broken.mult) is not None
    with pytest.raises(ValidationFailure):
        composition_service.validate_algebra(broken)


def test_conjugation():
    O = composition_service.zorn_octonion(F7)
    assert composition_service.conjugate(O, O.unity) == O.unity
    for index in range(5):
        x = random_element(F7, RANK, SampleStream(5, "conj", index))
        t = O.space.polarize(x, O.unity)
        assert x + composition_service.conjugate(O, x) == O.unity.scale(t)
        assert O.multiply(x, composition_service.conjugate(O, x)) == O.unity.scale(O.norm(x))


# ---------------------------------------------------------
# Para-octonions and Delta
# ---------------------------------------------------------

def test_para_algebra_is_symmetric(para_f7):
    assert para_f7.kind is AlgebraKind.PARA
    assert para_f7.unity is None
    assert composition_service.symmetry_defect(para_f7) is None


def test_para_needs_octonions(para_f7):
    with pytest.raises(PreconditionError):
        composition_service.para(para_f7)


def test_delta_is_cyclic(para_f7):
    for index in range(10):
        stream = SampleStream(9, "delta", index)
        u1, u2, u3 = (random_element(F7, RANK, stream) for _ in range(3))
        d = composition_service.delta(para_f7, u1, u2, u3)
        assert d == composition_service.delta(para_f7, u2, u3, u1)
        assert d == composition_service.delta(para_f7, u3, u1, u2)


# ---------------------------------------------------------
# Compositions of forms
# ---------------------------------------------------------

def test_companions_of_para_algebra_are_its_product(para_composition_f7):
    M = para_composition_f7
    m2, m3 = composition_service.companions(M)
    assert m2 == M.m
    assert m3 == M.m
    assert composition_service.companion_defect(M, m2, m3) is None


def test_scaled_composition(para_composition_f7):
    M = para_composition_f7
    same = composition_service.scale_composition(M, Gamma.unit(F7))
    assert same.forms == M.forms and same.m == M.m
    gamma = Gamma.of(F7, [2, 3, 5])
    scaled = composition_service.scale_composition(M, gamma)
    assert scaled.c1 == M.c1.scale(15)
    assert scaled.c2 == M.c2.scale(10)
    assert scaled.c3 == M.c3.scale(6)


def test_scaling_needs_units(para_composition_f7):
    with pytest.raises(NotAUnitError):
        composition_service.scale_composition(para_composition_f7, Gamma.of(F7, [1, 0, 1]))


def test_identity_is_a_morphism(para_composition_f7):
    M = para_composition_f7
    assert composition_service.is_morphism(TripleMap.identity(F7), M, M)
    doubled = LinearMap.identity(F7, RANK).scale(2)
    witness = composition_service.morphism_defect(TripleMap(doubled, doubled, doubled), M, M)
    assert witness["reason"] == "not an isometry"


def test_singular_composition_rejected(para_composition_f7):
    M = para_composition_f7
    flat = QuadraticSpace(F7, RANK, [[0] * RANK for _ in range(RANK)])
    singular = CompositionOfForms(M.c1, M.c2, flat, M.m)
    with pytest.raises(ValidationFailure):
        composition_service.validate_composition(singular)


# ---------------------------------------------------------
# Automorphisms and related triples
# ---------------------------------------------------------

def test_sl3_identity_is_identity():
    ident3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert composition_service.sl3_zorn_automorphism(F7, ident3) == LinearMap.identity(F7, RANK)
    with pytest.raises(PreconditionError):
        composition_service.sl3_zorn_automorphism(F7, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_random_sl3_maps_are_automorphisms():
    O = composition_service.zorn_octonion(F7)
    for index in range(5):
        t = composition_service.random_zorn_automorphism(F7, SampleStream(1, "sl3", index))
        assert composition_service.is_octonion_automorphism(O, t)


def test_j_gives_related_triples(para_f7):
    for index in range(3):
        t = composition_service.random_zorn_automorphism(F7, SampleStream(2, "j", index))
        triple = composition_service.j_triple(t)
        assert triple.maps == (t, t, t)
        assert composition_service.is_related_triple(triple, para_f7)


# ---------------------------------------------------------
# Octonionification
# ---------------------------------------------------------

def test_octonionify_para_composition(para_composition_f7):
    M = para_composition_f7
    points = composition_service.find_norm_one_points(M)
    assert points is not None
    a, b = points
    assert M.c3.evaluate(a) == 1 and M.c2.evaluate(b) == 1
    algebra, iso, para_iso = composition_service.octonionify(M, a, b)
    assert algebra.kind is AlgebraKind.OCTONION
    assert algebra.unity == M.apply(a, b)
    assert iso.t1 == LinearMap.identity(F7, RANK)
    target = CompositionOfForms(M.c1, M.c1, M.c1, algebra.mult)
    assert composition_service.is_morphism(iso, M, target)


def test_octonionify_needs_norm_one_points(para_composition_f7):
    M = para_composition_f7
    zero = Vector.zero(F7, RANK)
    with pytest.raises(PreconditionError):
        composition_service.octonionify(M, zero, zero)


def test_norm_one_search_over_rationals():
    M = composition_service.composition_of(composition_service.para(composition_service.zorn_octonion(Q)))
    a, b = composition_service.find_norm_one_points(M, cap=0)
    assert M.c3.evaluate(a) == 1 and M.c2.evaluate(b) == 1


def test_norm_one_search_over_prime_fields_is_lexicographic():
    F3 = RingDescriptor.prime_field(3)
    M = composition_service.composition_of(composition_service.para(composition_service.zorn_octonion(F3)))
    # every earlier candidate has x3 = 0 or x3 y3 != 2
    assert composition_service.find_norm_one_points(M, cap=29) is None
    a, b = composition_service.find_norm_one_points(M, cap=30)
    assert a.to_strings() == ["0", "0", "0", "0", "1", "0", "0", "2"]
    assert b == a
