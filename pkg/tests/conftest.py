import pytest

from app.models.albert import Gamma
from app.models.cubic import CubicNormStructure
from app.models.polynomial import Polynomial
from app.models.quadspace import Vector
from app.models.scalars import RingDescriptor
from app.services import albert_service, composition_service

F7 = RingDescriptor.prime_field(7)
Q = RingDescriptor.rationals()
Z = RingDescriptor.integers()


@pytest.fixture(scope="session")
def f7():
    return F7


@pytest.fixture(scope="session")
def q():
    return Q


@pytest.fixture(scope="session")
def h3_f7():
    """H3 of the split octonions over F_7 with Gamma = (1, 1, 1)."""
    return albert_service.h3(composition_service.zorn_octonion(F7), Gamma.unit(F7))


@pytest.fixture(scope="session")
def h3_q():
    return albert_service.h3(composition_service.zorn_octonion(Q), Gamma.unit(Q))


@pytest.fixture(scope="session")
def para_f7():
    return composition_service.para(composition_service.zorn_octonion(F7))


@pytest.fixture(scope="session")
def para_composition_f7(para_f7):
    return composition_service.composition_of(para_f7)


@pytest.fixture
def split_cubic():
    """Factory for R^3 with N(x) = x0 x1 x2, the smallest cubic norm structure."""

    def build(ring: RingDescriptor) -> CubicNormStructure:
        norm = Polynomial.from_indices(ring, 3, [((0, 1, 2), 1)])
        adjoint = [
            Polynomial.from_indices(ring, 3, [((1, 2), 1)]),
            Polynomial.from_indices(ring, 3, [((0, 2), 1)]),
            Polynomial.from_indices(ring, 3, [((0, 1), 1)]),
        ]
        gram = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
        return CubicNormStructure(ring, 3, Vector.of(ring, [1, 1, 1]), norm, adjoint, gram)

    return build
