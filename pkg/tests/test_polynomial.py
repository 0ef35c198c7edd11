import pytest

from app.core.exceptions import DimensionMismatchError, RingMismatchError
from app.models.polynomial import Polynomial, decode, encode, monomial_indices
from app.models.scalars import RingDescriptor

F3 = RingDescriptor.prime_field(3)
F7 = RingDescriptor.prime_field(7)
Q = RingDescriptor.rationals()
Z = RingDescriptor.integers()


def variables(ring, n):
    return [Polynomial.variable(ring, n, i) for i in range(n)]


def test_monomial_packing():
    m = encode([0, 0, 5])
    assert decode(m) == ((0, 2), (5, 1))
    assert monomial_indices(m) == [0, 0, 5]
    assert encode([1]) + encode([2]) == encode([1, 2])


def test_binomial_square():
    x, y = variables(Q, 2)
    p = (x + y) * (x + y)
    assert p.coefficient([0, 0]) == 1
    assert p.coefficient([0, 1]) == 2
    assert p.coefficient([1, 1]) == 1
    assert p.degree == 2


def test_frobenius_in_characteristic_three():
    x, y = variables(F3, 2)
    s = x + y
    assert s * s * s == x * x * x + y * y * y


def test_evaluate():
    x, y, z = variables(F7, 3)
    p = x * y * z + 3 * x - 1
    assert p.evaluate([F7.element(2), F7.element(3), F7.element(4)]) == (24 + 6 - 1) % 7
    with pytest.raises(DimensionMismatchError):
        p.evaluate([F7.element(1)])


def test_compose_difference_of_squares():
    x, y = variables(Q, 2)
    p = x * y
    assert p.compose([x + y, x - y]) == x * x - y * y


def test_derivative():
    x, y = variables(Q, 2)
    p = x * x * x + 5 * x * y
    assert p.derivative(0) == 3 * x * x + 5 * y
    assert p.derivative(1) == 5 * x


def test_first_difference_names_lowest_monomial():
    x, y = variables(Z, 2)
    assert (x * y).first_difference(y * x) is None
    witness = (x + x * y).first_difference(x * y)
    assert witness == {"monomial": [0], "left": "1", "right": "0"}


def test_base_change_from_integers():
    x, y = variables(Z, 2)
    p = 8 * x * y + 1
    lifted = p.base_change(F7)
    assert lifted.ring == F7
    assert lifted.coefficient([0, 1]) == 1
    with pytest.raises(RingMismatchError):
        lifted.base_change(Q)


def test_degree_limit():
    x = Polynomial.variable(Q, 1, 0)
    p = x
    for _ in range(7):
        p = p * x
    assert p.degree == 8
    with pytest.raises(DimensionMismatchError):
        p * p


def test_mismatched_variable_counts():
    with pytest.raises(DimensionMismatchError):
        Polynomial.variable(Q, 2, 0) + Polynomial.variable(Q, 3, 0)
    with pytest.raises(DimensionMismatchError):
        Polynomial.variable(Q, 2, 2)


def test_zero_coefficients_are_dropped():
    x, y = variables(F7, 2)
    assert (7 * x * y).is_zero()
    assert (x - x).terms == {}
