import pytest

from app.core.exceptions import (
    InvalidScalarError,
    NotAUnitError,
    PreconditionError,
    RingMismatchError,
    UnsupportedRingError,
)
from app.models.albert import ALBERT_RANK, AlbertElement, Frame, Gamma, block_offset, e, embed, restrict
from app.models.composition import RANK, TripleMap
from app.models.quadspace import LinearMap, Vector
from app.models.scalars import RingDescriptor
from app.services import albert_service, composition_service, cubic_service
from app.services.sampling import SampleStream

F7 = RingDescriptor.prime_field(7)
Q = RingDescriptor.rationals()
Z = RingDescriptor.integers()


# ---------------------------------------------------------
# Coordinates
# ---------------------------------------------------------

def test_block_layout():
    assert [block_offset(i) for i in (1, 2, 3)] == [3, 11, 19]
    assert ALBERT_RANK == 27
    u = Vector.of(F7, range(RANK))
    x = embed(F7, 2, u)
    assert restrict(x, 2) == u
    assert restrict(x, 1).is_zero()


def test_structured_view():
    u = Vector.of(Q, [1, 2, 3, 4, 5, 6, 7, 8])
    x = AlbertElement.from_parts(Q, ["1/2", 0, 3], u3=u)
    flat = x.flatten()
    assert flat.raw[:3] == (Q.element("1/2").value, 0, 3)
    back = AlbertElement.unflatten(flat)
    assert back.u(3) == u
    assert back.structured()["alphas"] == ["1/2", "0", "3"]


def test_gamma_parsing():
    gamma = Gamma.parse(F7, "2, 3, 5")
    assert gamma.to_strings() == ["2", "3", "5"]
    assert gamma.product() == 2
    assert gamma[2] == 3
    assert not Gamma.parse(F7, "1,0,1").is_valid()
    with pytest.raises(InvalidScalarError):
        Gamma.parse(F7, "1,2")


def test_gamma_base_change():
    gamma = Gamma.of(Z, [1, -1, 1])
    assert gamma.base_change(Z) is gamma
    assert gamma.base_change(Q).to_strings() == ["1", "-1", "1"]
    assert gamma.base_change(F7).to_strings() == ["1", "6", "1"]
    with pytest.raises(RingMismatchError):
        Gamma.of(F7, [1, 2, 3]).base_change(Q)


# ---------------------------------------------------------
# H(M, Gamma)
# ---------------------------------------------------------

def test_non_unit_gamma_rejected(para_composition_f7):
    with pytest.raises(NotAUnitError):
        albert_service.hermitian_algebra(para_composition_f7, Gamma.of(F7, [1, 0, 1]))


def test_delta_norm_matches_composition_norm(h3_f7, para_f7):
    assert albert_service.delta_norm(para_f7, Gamma.unit(F7)) == h3_f7.norm_poly


def test_scaled_gamma_trace(para_composition_f7):
    M = para_composition_f7
    gamma = Gamma.of(F7, [2, 3, 5])
    A = albert_service.hermitian_algebra(M, gamma)
    gram1 = M.c1.gram_raw()
    offset = block_offset(1)
    for a in range(RANK):
        for b in range(RANK):
            assert A.trace_gram[offset + a][offset + b] == F7.reduce(15 * gram1[a][b])
    assert A.norm(A.one()) == 1


# ---------------------------------------------------------
# The embedding iota
# ---------------------------------------------------------

def test_iota_of_identity():
    assert albert_service.iota(TripleMap.identity(F7)) == LinearMap.identity(F7, ALBERT_RANK)


def test_iota_of_automorphism_and_stabiliser(h3_f7):
    A = h3_f7
    t = composition_service.random_zorn_automorphism(F7, SampleStream(12, "iota", 0))
    triple = composition_service.j_triple(t)
    phi = albert_service.iota(triple)
    assert cubic_service.is_automorphism(A, phi)
    for i in (1, 2, 3):
        assert phi.apply(e(F7, i)) == e(F7, i)
    assert albert_service.stabiliser_triple(A, phi) == triple


def test_iota_is_a_homomorphism():
    s = composition_service.j_triple(composition_service.random_zorn_automorphism(F7, SampleStream(1, "s", 0)))
    t = composition_service.j_triple(composition_service.random_zorn_automorphism(F7, SampleStream(1, "t", 0)))
    assert albert_service.iota(s.compose(t)) == albert_service.iota(s).compose(albert_service.iota(t))
    assert albert_service.iota(t.inverse()) == albert_service.iota(t).inverse()


def test_stabiliser_needs_fixed_frame(h3_f7):
    doubled = LinearMap.identity(F7, ALBERT_RANK).scale(2)
    with pytest.raises(PreconditionError):
        albert_service.stabiliser_triple(h3_f7, doubled)


# ---------------------------------------------------------
# Frames and Peirce spaces
# ---------------------------------------------------------

def test_distinguished_frame(h3_f7):
    A = h3_f7
    frame = Frame.distinguished(F7)
    assert albert_service.is_frame_of(A, frame)
    zero = A.zero()
    assert not albert_service.is_frame(A, A.one(), zero, zero)
    assert not albert_service.is_frame(A, e(F7, 1), e(F7, 1), e(F7, 3))


def test_peirce_dimensions(h3_f7):
    A = h3_f7
    for i in (1, 2, 3):
        assert len(albert_service.peirce_one(A, e(F7, i))) == 16
    assert albert_service.peirce_one(A, A.one()) == []


def test_peirce_basis_solves_the_circle_equation(h3_q):
    c = e(Q, 1)
    basis = albert_service.peirce_one(h3_q, c)
    assert len(basis) == 16
    assert all(v.ring == Q and h3_q.circle(c, v) == v for v in basis)


def test_coordinate_spaces_of_distinguished_frame(h3_f7):
    A = h3_f7
    spaces = albert_service.coordinate_spaces(A, Frame.distinguished(F7))
    assert [len(b) for b in spaces] == [8, 8, 8]
    for l, basis in enumerate(spaces, start=1):
        assert basis == [embed(F7, l, Vector.basis(F7, RANK, k)) for k in range(RANK)]


def test_frames_over_integers_are_checked_over_rationals(split_cubic):
    A = split_cubic(Z)
    assert albert_service.field_view(A).ring == Q
    c1, c2, c3 = A.element([1, 0, 0]), A.element([0, 1, 0]), A.element([0, 0, 1])
    assert albert_service.is_frame(A, c1, c2, c3)
    assert not albert_service.is_frame(A, c1 + c2, A.zero(), c3)
    # R^3 has no off-diagonal Peirce space
    assert albert_service.peirce_one(A, c1) == []


def test_deformation_of_distinguished_frame(h3_f7, para_composition_f7):
    M = albert_service.deform(h3_f7, Frame.distinguished(F7))
    assert composition_service.morphism_defect(TripleMap.identity(F7), M, para_composition_f7) is None


def test_s_multiplicativity(h3_f7):
    A = h3_f7
    spaces = albert_service.coordinate_spaces(A, Frame.distinguished(F7))
    for index in range(5):
        stream = SampleStream(3, "peirce", index)
        x = albert_service.random_combination(F7, spaces[2], stream)
        y = albert_service.random_combination(F7, spaces[1], stream)
        assert albert_service.s_multiplicativity_defect(A, spaces, x, y) is None


# ---------------------------------------------------------
# Moving frames and transport
# ---------------------------------------------------------

def test_frame_mover_moves_the_frame(h3_f7):
    A = h3_f7
    w, phi = albert_service.frame_mover(A, 0)
    assert A.norm(w) == 1
    assert A.square(w) == A.one()
    assert cubic_service.is_automorphism(A, phi)
    e_frame = Frame.distinguished(F7)
    moved = albert_service.frame_image(A, phi, e_frame)
    assert moved != e_frame
    assert [len(b) for b in albert_service.coordinate_spaces(A, moved)] == [8, 8, 8]


def test_frame_mover_is_seeded(h3_f7):
    assert albert_service.frame_mover(h3_f7, 5)[0] == albert_service.frame_mover(h3_f7, 5)[0]


def test_transport_is_a_morphism(h3_f7):
    A = h3_f7
    _, phi = albert_service.frame_mover(A, 1)
    source = Frame.distinguished(F7)
    target = albert_service.frame_image(A, phi, source)
    t = albert_service.transport(A, phi, source, target)
    assert t.is_invertible()
    assert composition_service.is_morphism(t, albert_service.deform(A, source), albert_service.deform(A, target))


def test_transport_needs_matching_frames(h3_f7):
    A = h3_f7
    _, phi = albert_service.frame_mover(A, 1)
    source = Frame.distinguished(F7)
    with pytest.raises(PreconditionError):
        albert_service.transport(A, phi, source, source)


def swap_e1_e2(ring):
    rows = [[1 if c == r else 0 for c in range(ALBERT_RANK)] for r in range(ALBERT_RANK)]
    rows[0], rows[1] = rows[1], rows[0]
    return LinearMap(ring, rows)


def test_frame_maps_must_be_automorphisms(h3_f7):
    A = h3_f7
    source = Frame.distinguished(F7)
    # fixes 1 and permutes the frame, but alpha1 q(u1) becomes alpha2 q(u1)
    phi = swap_e1_e2(F7)
    assert albert_service.is_frame_of(A, source.image(phi))
    assert not cubic_service.is_automorphism(A, phi)
    with pytest.raises(PreconditionError):
        albert_service.frame_image(A, phi, source)
    with pytest.raises(PreconditionError):
        albert_service.transport(A, phi, source, source.image(phi))
    with pytest.raises(PreconditionError):
        albert_service.frame_image(A, LinearMap.identity(F7, ALBERT_RANK).scale(2), source)


def test_frame_mover_needs_two_invertible(split_cubic):
    with pytest.raises(UnsupportedRingError):
        albert_service.frame_mover(split_cubic(Z), 0)
