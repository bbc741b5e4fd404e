"""Real algebraic numbers as (minimal polynomial, isolating interval) pairs."""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Union

import mpmath
from sympy import Poly, expand, resultant

from ..errors import AlgebraError
from .polys import (
    X, Y, Interval, coprime_residues, frac, interval_add, interval_mul,
    interval_scale, irreducible_factors, isolate_roots, poly, rat,
    real_cyclotomic, select_root, sqrt_bounds, substitute,
)

logger = logging.getLogger(__name__)

Number = Union["AlgebraicReal", int, Fraction]

_SERIAL = re.compile(
    r"^\s*minpoly=\[(?P<coeffs>[^\]]*)\];\s*interval=\((?P<lo>[^,]+),(?P<hi>[^)]+)\)\s*$")


@dataclass(frozen=True, eq=False)
class AlgebraicReal:
    """A real algebraic number.

    ``min_poly`` is the monic minimal polynomial over QQ and ``(lo, hi)`` an
    interval with rational endpoints holding exactly one of its real roots.
    Rationals use a degree-one polynomial and the interval (r - 1, r + 1).
    """

    min_poly: Poly
    lo: Fraction
    hi: Fraction

    # ------------------------------------------------------------ construction ---

    @classmethod
    def from_rational(cls, value) -> "AlgebraicReal":
        r = frac(value)
        return cls(poly([1, -r]), r - 1, r + 1)

    @classmethod
    def from_root(cls, min_poly: Poly, lo: Fraction, hi: Fraction) -> "AlgebraicReal":
        """Wrap a root of an irreducible polynomial isolated by [lo, hi]."""
        min_poly = min_poly.monic()
        if min_poly.degree() == 1:
            return cls.from_rational(-frac(min_poly.all_coeffs()[1]))
        return cls(min_poly, frac(lo), frac(hi))

    @classmethod
    def coerce(cls, value: Number) -> "AlgebraicReal":
        if isinstance(value, AlgebraicReal):
            return value
        return cls.from_rational(value)

    # -------------------------------------------------------------- inspection ---

    @property
    def degree(self) -> int:
        return self.min_poly.degree()

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def rational(self) -> Fraction:
        if not self.is_rational:
            raise AlgebraError("not a rational number")
        return -frac(self.min_poly.all_coeffs()[1])

    def enclosure(self, bits: int) -> Interval:
        """Rational interval of width at most 2^-bits containing the number."""
        if self.is_rational:
            r = self.rational
            return r, r
        s, t = self.min_poly.refine_root(rat(self.lo), rat(self.hi),
                                         eps=rat(Fraction(1, 1 << bits)))
        return frac(s), frac(t)

    def sign(self) -> int:
        if self.is_rational:
            r = self.rational
            return (r > 0) - (r < 0)
        if self.lo >= 0:
            return 1
        if self.hi <= 0:
            return -1
        return -1 if self.min_poly.count_roots(rat(self.lo), 0) > 0 else 1

    def is_algebraic_integer(self) -> bool:
        return all(frac(c).denominator == 1 for c in self.min_poly.all_coeffs())

    def is_totally_real(self) -> bool:
        return len(isolate_roots(self.min_poly)) == self.degree

    def conjugates(self) -> List["AlgebraicReal"]:
        """The real conjugates, ascending."""
        if self.is_rational:
            return [self]
        return [AlgebraicReal(self.min_poly, s, t) for (s, t), _ in isolate_roots(self.min_poly)]

    def to_mpf(self, digits: int = 50) -> mpmath.mpf:
        bits = int(math.ceil((digits + 5) * math.log2(10)))
        lo, hi = self.enclosure(bits)
        mid = (lo + hi) / 2
        with mpmath.workdps(digits + 10):
            return mpmath.mpf(mid.numerator) / mpmath.mpf(mid.denominator)

    def __float__(self) -> float:
        return float(self.to_mpf(20))

    # ------------------------------------------------------------------- order ---

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AlgebraicReal, int, Fraction)):
            return NotImplemented
        other = AlgebraicReal.coerce(other)
        if self.min_poly != other.min_poly:
            return False
        if self.is_rational:
            return True
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return False
        return self.min_poly.count_roots(rat(lo), rat(hi)) == 1

    def __hash__(self) -> int:
        # same as hash(Fraction) for rationals
        if self.is_rational:
            return hash(self.rational)
        return hash(tuple(self.min_poly.all_coeffs()))

    def compare(self, other: Number) -> int:
        other = AlgebraicReal.coerce(other)
        if self == other:
            return 0
        bits = 16
        while True:
            a, b = self.enclosure(bits), other.enclosure(bits)
            if a[1] < b[0]:
                return -1
            if b[1] < a[0]:
                return 1
            bits *= 2

    def __lt__(self, other: Number) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: Number) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self.compare(other) >= 0

    # -------------------------------------------------------------- arithmetic ---

    def __neg__(self) -> "AlgebraicReal":
        return self._scale(Fraction(-1))

    def __add__(self, other: Number) -> "AlgebraicReal":
        other = AlgebraicReal.coerce(other)
        if other.is_rational:
            return self._shift(other.rational)
        if self.is_rational:
            return other._shift(self.rational)
        pa = substitute(self.min_poly, Y)
        pb = substitute(other.min_poly, X - Y)
        res = poly(resultant(pa, expand(pb), Y))
        return _from_resultant(res, lambda bits: interval_add(self.enclosure(bits),
                                                             other.enclosure(bits)))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "AlgebraicReal":
        return self + (-AlgebraicReal.coerce(other))

    def __rsub__(self, other: Number) -> "AlgebraicReal":
        return AlgebraicReal.coerce(other) + (-self)

    def __mul__(self, other: Number) -> "AlgebraicReal":
        other = AlgebraicReal.coerce(other)
        if other.is_rational:
            return self._scale(other.rational)
        if self.is_rational:
            return other._scale(self.rational)
        n = other.degree
        pa = substitute(self.min_poly, Y)
        pb = expand(substitute(other.min_poly, X / Y) * Y ** n)
        res = poly(resultant(pa, pb, Y))
        return _from_resultant(res, lambda bits: interval_mul(self.enclosure(bits),
                                                             other.enclosure(bits)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "AlgebraicReal":
        return self * AlgebraicReal.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> "AlgebraicReal":
        return AlgebraicReal.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "AlgebraicReal":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = AlgebraicReal.from_rational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def inverse(self) -> "AlgebraicReal":
        if self.sign() == 0:
            raise AlgebraError("division by zero")
        if self.is_rational:
            return AlgebraicReal.from_rational(1 / self.rational)
        lo, hi = self.lo, self.hi
        bits = 8
        while lo < 0 < hi:
            lo, hi = self.enclosure(bits)
            bits *= 2
        reversed_poly = poly(list(reversed(self.min_poly.all_coeffs())))
        return AlgebraicReal.from_root(reversed_poly, 1 / hi, 1 / lo)

    def sqrt(self) -> "AlgebraicReal":
        """The non-negative square root."""
        s = self.sign()
        if s < 0:
            raise AlgebraError("square root of a negative number")
        if s == 0:
            return self
        if self.is_rational:
            r = self.rational
            num, den = math.isqrt(r.numerator), math.isqrt(r.denominator)
            if num * num == r.numerator and den * den == r.denominator:
                return AlgebraicReal.from_rational(Fraction(num, den))
        squared = poly(substitute(self.min_poly, X ** 2))

        def enclose(bits: int) -> Interval:
            lo, hi = self.enclosure(bits + 4)
            return sqrt_bounds(max(lo, Fraction(0)), bits)[0], sqrt_bounds(hi, bits)[1]

        return _from_resultant(squared, enclose)

    def _shift(self, r: Fraction) -> "AlgebraicReal":
        if r == 0:
            return self
        if self.is_rational:
            return AlgebraicReal.from_rational(self.rational + r)
        return AlgebraicReal(self.min_poly.shift(-rat(r)), self.lo + r, self.hi + r)

    def _scale(self, r: Fraction) -> "AlgebraicReal":
        if r == 0:
            return AlgebraicReal.from_rational(0)
        if self.is_rational:
            return AlgebraicReal.from_rational(self.rational * r)
        scaled = poly(substitute(self.min_poly, X / rat(r))).monic()
        lo, hi = interval_scale((self.lo, self.hi), r)
        return AlgebraicReal(scaled, lo, hi)

    # ---------------------------------------------------------- serialization ---

    def dumps(self) -> str:
        """``minpoly=[c0, c1, ..., cn]; interval=(p/q, r/s)`` with integer coefficients."""
        _, primitive = self.min_poly.clear_denoms()
        coeffs = [str(int(c)) for c in reversed(primitive.all_coeffs())]
        return (f"minpoly=[{', '.join(coeffs)}]; "
                f"interval=({_fmt(self.lo)}, {_fmt(self.hi)})")

    @classmethod
    def loads(cls, text: str) -> "AlgebraicReal":
        match = _SERIAL.match(text)
        if not match:
            raise AlgebraError(f"malformed algebraic number: {text!r}")
        coeffs = [int(c) for c in match.group("coeffs").split(",")]
        min_poly = poly(list(reversed(coeffs))).monic()
        return cls.from_root(min_poly, Fraction(match.group("lo").strip()),
                             Fraction(match.group("hi").strip()))

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.dumps()})"

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.rational)
        return mpmath.nstr(self.to_mpf(20), 12)


def _fmt(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _from_resultant(res: Poly, enclose: Callable[[int], Interval]) -> AlgebraicReal:
    if res.is_zero:
        raise AlgebraError("degenerate resultant")
    if res.degree() > 24:
        logger.debug("factoring a resultant of degree %d", res.degree())
    f, s, t = select_root(irreducible_factors(res), enclose)
    return AlgebraicReal.from_root(f, s, t)


# --------------------------------------------------------------- trig values ---

@lru_cache(maxsize=None)
def two_cos_rational_pi(q: Fraction) -> AlgebraicReal:
    """2cos(q*pi) for rational q, exactly.

    With q/2 = j/n in lowest terms the value is 2cos(2*pi*j/n), a root of the
    real cyclotomic polynomial of index n. Those roots are 2cos(2*pi*k/n) for
    k coprime to n below n/2, decreasing in k, which fixes the root index.
    """
    half = (frac(q) / 2) % 1
    j, n = half.numerator, half.denominator
    if n <= 2:
        return AlgebraicReal.from_rational(2 if n == 1 else -2)
    k = min(j, n - j)
    ks = coprime_residues(n)
    roots = isolate_roots(real_cyclotomic(n))
    (s, t), _ = roots[len(ks) - 1 - ks.index(k)]
    return AlgebraicReal.from_root(real_cyclotomic(n), s, t)


def two_cos_pi_over(m: int) -> AlgebraicReal:
    """2cos(pi/m), the largest root of the real cyclotomic polynomial of index 2m."""
    if m < 2:
        raise AlgebraError(f"dihedral label must be at least 2, got {m}")
    return two_cos_rational_pi(Fraction(1, m))


def cos_pi_over(m: int) -> AlgebraicReal:
    return two_cos_pi_over(m) * Fraction(1, 2)


def cos_rational_pi(q) -> AlgebraicReal:
    return two_cos_rational_pi(frac(q)) * Fraction(1, 2)


def sqrt_of(value) -> AlgebraicReal:
    return AlgebraicReal.coerce(value).sqrt()


def decimal(value: AlgebraicReal, digits: int) -> str:
    return mpmath.nstr(value.to_mpf(digits), digits)
