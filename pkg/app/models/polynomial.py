"""Sparse exact polynomials over a `RingDescriptor`.

A monomial is packed into one integer with four bits per variable, so the
product of two monomials is plain integer addition. Degrees stay below 16,
which covers every identity the toolkit checks (the largest is N(x^#), of
degree six).
"""
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError, RingMismatchError
from app.models.scalars import Raw, RingDescriptor, RingKind, Scalar

BITS = 4
MASK = (1 << BITS) - 1
MAX_DEGREE = MASK


@lru_cache(maxsize=None)
def decode(packed: int) -> Tuple[Tuple[int, int], ...]:
    """Packed monomial -> ((variable, exponent), ...) in increasing variable order."""
    out = []
    var = 0
    while packed:
        exp = packed & MASK
        if exp:
            out.append((var, exp))
        packed >>= BITS
        var += 1
    return tuple(out)


def encode(indices: Iterable[int]) -> int:
    """Variable indices with repetition, e.g. [0, 0, 5] for x0^2 x5."""
    packed = 0
    for i in indices:
        packed += 1 << (BITS * i)
    return packed


def monomial_indices(packed: int) -> List[int]:
    return [var for var, exp in decode(packed) for _ in range(exp)]


def monomial_degree(packed: int) -> int:
    return sum(exp for _, exp in decode(packed))


class Polynomial:
    """Polynomial in `nvars` variables with coefficients in canonical raw form."""

    __slots__ = ("ring", "nvars", "terms", "_degree")

    def __init__(self, ring: RingDescriptor, nvars: int, terms: Optional[Dict[int, Raw]] = None, reduced: bool = False):
        self.ring = ring
        self.nvars = nvars
        if terms is None:
            terms = {}
        if not reduced:
            reduce = ring.reduce
            terms = {m: c for m, c in ((m, reduce(c)) for m, c in terms.items()) if c != 0}
        self.terms = terms
        self._degree = max((monomial_degree(m) for m in terms), default=-1)

    @classmethod
    def variable(cls, ring: RingDescriptor, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise DimensionMismatchError(f"variable {i} outside 0..{nvars - 1}")
        return cls(ring, nvars, {encode([i]): 1})

    @classmethod
    def constant(cls, ring: RingDescriptor, nvars: int, value: Raw) -> "Polynomial":
        return cls(ring, nvars, {0: value})

    @classmethod
    def linear(cls, ring: RingDescriptor, coeffs: Sequence[Raw]) -> "Polynomial":
        """Sum of coeffs[i] * x_i."""
        return cls(ring, len(coeffs), {encode([i]): c for i, c in enumerate(coeffs) if c != 0})

    @classmethod
    def from_indices(cls, ring: RingDescriptor, nvars: int, entries: Iterable[Tuple[Sequence[int], Raw]]) -> "Polynomial":
        terms: Dict[int, Raw] = {}
        for indices, coeff in entries:
            if any(not 0 <= i < nvars for i in indices):
                raise DimensionMismatchError(f"monomial {list(indices)} outside {nvars} variables")
            m = encode(indices)
            terms[m] = terms.get(m, 0) + coeff
        return cls(ring, nvars, terms)

    @property
    def degree(self) -> int:
        return self._degree

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        if other.nvars != self.nvars:
            raise DimensionMismatchError(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return Polynomial.constant(self.ring, self.nvars, other.value)
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial.constant(self.ring, self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(self.ring, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self._degree + other._degree > MAX_DEGREE:
            raise DimensionMismatchError("product degree exceeds the packed monomial range")
        acc: Dict[int, Raw] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                acc[m] = acc.get(m, 0) + c1 * c2
        return Polynomial(self.ring, self.nvars, acc)

    __rmul__ = __mul__

    def scale(self, factor: Raw) -> "Polynomial":
        return Polynomial(self.ring, self.nvars, {m: c * factor for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.ring}, nvars={self.nvars}, terms={len(self.terms)})"

    def coefficient(self, indices: Sequence[int]) -> Scalar:
        return Scalar(self.ring, self.terms.get(encode(indices), self.ring.reduce(0)))

    def monomials(self) -> Iterator[Tuple[List[int], Scalar]]:
        """(indices, coefficient) pairs in a reproducible order."""
        for m in sorted(self.terms, key=lambda p: (monomial_degree(p), monomial_indices(p))):
            yield monomial_indices(m), Scalar(self.ring, self.terms[m])

    def evaluate_raw(self, values: Sequence[Raw]) -> Raw:
        total = 0
        for m, c in self.terms.items():
            for var, exp in decode(m):
                v = values[var]
                if not v:
                    break
                c = c * (v if exp == 1 else v ** exp)
            else:
                total += c
        return self.ring.reduce(total)

    def evaluate(self, values: Sequence[Scalar]) -> Scalar:
        if len(values) != self.nvars:
            raise DimensionMismatchError(f"expected {self.nvars} values, got {len(values)}")
        return Scalar(self.ring, self.evaluate_raw([self.ring.element(v).value for v in values]))

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute subs[i] for x_i; all substitutes share a ring and variable count."""
        if len(subs) != self.nvars:
            raise DimensionMismatchError(f"expected {self.nvars} substitutes, got {len(subs)}")
        if not subs:
            return Polynomial(self.ring, 0, dict(self.terms), reduced=True)
        target = subs[0].nvars
        for s in subs:
            if s.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {s.ring}")
        powers: Dict[Tuple[int, int], Dict[int, Raw]] = {}

        def power(var: int, exp: int) -> Dict[int, Raw]:
            key = (var, exp)
            if key not in powers:
                powers[key] = subs[var].terms if exp == 1 else _mul_terms(power(var, exp - 1), subs[var].terms, self.ring)
            return powers[key]

        acc: Dict[int, Raw] = {}
        for m, c in self.terms.items():
            part: Dict[int, Raw] = {0: c}
            for var, exp in decode(m):
                part = _mul_terms(part, power(var, exp), None)
                if not part:
                    break
            for mm, cc in part.items():
                acc[mm] = acc.get(mm, 0) + cc
        return Polynomial(self.ring, target, acc)

    def derivative(self, i: int) -> "Polynomial":
        shift = BITS * i
        terms: Dict[int, Raw] = {}
        for m, c in self.terms.items():
            exp = (m >> shift) & MASK
            if exp:
                mm = m - (1 << shift)
                terms[mm] = terms.get(mm, 0) + c * exp
        return Polynomial(self.ring, self.nvars, terms)

    def base_change(self, ring: RingDescriptor) -> "Polynomial":
        if ring == self.ring:
            return self
        if self.ring.kind is not RingKind.INTEGERS:
            raise RingMismatchError(f"No ring morphism {self.ring} -> {ring}")
        return Polynomial(ring, self.nvars, dict(self.terms))

    def first_difference(self, other: "Polynomial") -> Optional[dict]:
        """JSON-ready witness of the first monomial where the two tables disagree."""
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        diffs = [m for m in keys if self.terms.get(m, 0) != other.terms.get(m, 0)]
        if not diffs:
            return None
        m = min(diffs, key=lambda p: (monomial_degree(p), monomial_indices(p)))
        zero = self.ring.reduce(0)
        return {
            "monomial": monomial_indices(m),
            "left": str(self.terms.get(m, zero)),
            "right": str(other.terms.get(m, zero)),
        }


def _mul_terms(a: Dict[int, Raw], b: Dict[int, Raw], ring: Optional[RingDescriptor]) -> Dict[int, Raw]:
    acc: Dict[int, Raw] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            acc[m] = acc.get(m, 0) + c1 * c2
    if ring is not None:
        reduce = ring.reduce
        return {m: r for m, r in ((m, reduce(c)) for m, c in acc.items()) if r != 0}
    return acc
