"""Exact scalar rings: prime fields, the rationals and the integers.

Every other module is generic over `RingDescriptor`; nothing in the toolkit
ever compares scalars approximately.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from app.core.exceptions import (
    InvalidScalarError,
    NotAUnitError,
    RingMismatchError,
    UnsupportedRingError,
)

MAX_PRIME = 2 ** 31

Raw = Union[int, Fraction]


class RingKind(enum.Enum):
    PRIME_FIELD = "Fp"
    RATIONALS = "Q"
    INTEGERS = "Z"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set is exact below 3.4e14."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RingDescriptor:
    kind: RingKind
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind is RingKind.PRIME_FIELD:
            if self.modulus is None or not is_prime(self.modulus) or self.modulus > MAX_PRIME:
                raise UnsupportedRingError(f"Fp:{self.modulus} is not a prime field with p <= 2^31")
        elif self.modulus is not None:
            raise UnsupportedRingError(f"{self.kind.value} takes no modulus")

    @classmethod
    def prime_field(cls, p: int) -> "RingDescriptor":
        return cls(RingKind.PRIME_FIELD, p)

    @classmethod
    def rationals(cls) -> "RingDescriptor":
        return cls(RingKind.RATIONALS)

    @classmethod
    def integers(cls) -> "RingDescriptor":
        return cls(RingKind.INTEGERS)

    @classmethod
    def parse(cls, text: str) -> "RingDescriptor":
        """Parse the ring literal syntax "Fp:7", "Q" or "Z"."""
        text = text.strip()
        if text == "Q":
            return cls.rationals()
        if text == "Z":
            return cls.integers()
        if text.startswith("Fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise UnsupportedRingError(f"Bad prime in ring literal {text!r}")
            return cls.prime_field(p)
        raise UnsupportedRingError(f"Unknown ring literal {text!r}")

    def __str__(self) -> str:
        if self.kind is RingKind.PRIME_FIELD:
            return f"Fp:{self.modulus}"
        return self.kind.value

    @property
    def is_field(self) -> bool:
        return self.kind is not RingKind.INTEGERS

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind is RingKind.PRIME_FIELD else 0

    @property
    def size(self) -> Optional[int]:
        return self.modulus if self.kind is RingKind.PRIME_FIELD else None

    def fraction_field(self) -> "RingDescriptor":
        return RingDescriptor.rationals() if self.kind is RingKind.INTEGERS else self

    # Raw-value arithmetic. Raw values are ints (Fp, Z) or Fractions (Q);
    # `reduce` maps any integer-valued combination back to canonical form.

    def reduce(self, value: Raw) -> Raw:
        if self.kind is RingKind.PRIME_FIELD:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
            return value % self.modulus
        if self.kind is RingKind.RATIONALS:
            return value if isinstance(value, Fraction) else Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise InvalidScalarError(f"{value} is not an integer")
            return value.numerator
        return value

    def is_unit_raw(self, value: Raw) -> bool:
        if self.kind is RingKind.INTEGERS:
            return value in (1, -1)
        return value != 0

    def invert_raw(self, value: Raw) -> Raw:
        if not self.is_unit_raw(value):
            raise NotAUnitError(f"{value} is not a unit in {self}")
        if self.kind is RingKind.PRIME_FIELD:
            return pow(value, -1, self.modulus)
        if self.kind is RingKind.RATIONALS:
            return 1 / value
        return value

    def sqrt_raw(self, value: Raw) -> Optional[Raw]:
        """A square root of `value`, or None when none exists in the ring."""
        if self.kind is RingKind.PRIME_FIELD:
            return _sqrt_mod(value, self.modulus)
        if self.kind is RingKind.RATIONALS:
            if value < 0:
                return None
            num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
            if num * num == value.numerator and den * den == value.denominator:
                return Fraction(num, den)
            return None
        if value < 0:
            return None
        root = math.isqrt(value)
        return root if root * root == value else None

    # Scalar construction

    def element(self, value: Union[int, Fraction, str, "Scalar"]) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ring == self:
                return value
            return self.from_integer(value)
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InvalidScalarError(f"Cannot parse scalar {value!r}")
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise InvalidScalarError(f"Unsupported scalar value {value!r}")
        if self.kind is RingKind.PRIME_FIELD and isinstance(value, Fraction) and value.denominator % self.modulus == 0:
            raise InvalidScalarError(f"{value} has no image in {self}")
        return Scalar(self, self.reduce(value))

    def from_integer(self, scalar: "Scalar") -> "Scalar":
        """The ring morphism Z -> self (identity on self)."""
        if scalar.ring == self:
            return scalar
        if scalar.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {scalar.ring} -> {self}")
        return Scalar(self, self.reduce(scalar.value))

    def zero(self) -> "Scalar":
        return Scalar(self, self.reduce(0))

    def one(self) -> "Scalar":
        return Scalar(self, self.reduce(1))


def _sqrt_mod(a: int, p: int) -> Optional[int]:
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


class Scalar:
    """An immutable ring element in canonical form."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: RingDescriptor, value: Raw):
        self.ring = ring
        self.value = value

    def _raw(self, other):
        if isinstance(other, Scalar):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.reduce(other)
        return NotImplemented

    def __add__(self, other):
        v = self._raw(other)
        if v is NotImplemented:
            return v
        return Scalar(self.ring, self.ring.reduce(self.value + v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._raw(other)
        if v is NotImplemented:
            return v
        return Scalar(self.ring, self.ring.reduce(self.value - v))

    def __rsub__(self, other):
        v = self._raw(other)
        if v is NotImplemented:
            return v
        return Scalar(self.ring, self.ring.reduce(v - self.value))

    def __mul__(self, other):
        v = self._raw(other)
        if v is NotImplemented:
            return v
        return Scalar(self.ring, self.ring.reduce(self.value * v))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.reduce(-self.value))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == self.ring.reduce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.ring.is_unit_raw(self.value)

    def invert(self) -> "Scalar":
        return Scalar(self.ring, self.ring.invert_raw(self.value))

    def sqrt(self) -> Optional["Scalar"]:
        root = self.ring.sqrt_raw(self.value)
        return None if root is None else Scalar(self.ring, root)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Scalar({self.ring}, {self.value})"


def arith(op: str, a: Scalar, b: Scalar) -> Scalar:
    """Ring arithmetic by operation name: add, sub, mul or neg (b ignored)."""
    if op == "neg":
        return -a
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown operation {op!r}")


def is_unit(a: Scalar) -> bool:
    return a.is_unit()


def invert(a: Scalar) -> Scalar:
    return a.invert()
