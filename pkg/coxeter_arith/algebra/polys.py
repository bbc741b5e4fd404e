"""Polynomial plumbing shared by the exact-algebra module.

Polynomials are sympy ``Poly`` objects over ``QQ`` in the generator ``X``.
Coefficient lists handed to callers are highest-degree first (sympy's
``all_coeffs`` order); the text serialization of algebraic numbers is the
one place that uses lowest-degree first.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, List, Sequence, Tuple

from sympy import QQ, Poly, Rational, Symbol, cyclotomic_poly, resultant

from ..errors import AlgebraError, InternalCheckError


X = Symbol("x")
Y = Symbol("y")
Z = Symbol("z")

Interval = Tuple[Fraction, Fraction]


# ------------------------------------------------------------------ Conversions ---

def frac(value) -> Fraction:
    """sympy Rational / int / Fraction -> Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


def rat(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def poly(expr_or_coeffs, gen=X) -> Poly:
    """Build a Poly over QQ from an expression or a highest-first coefficient list."""
    if isinstance(expr_or_coeffs, (list, tuple)):
        return Poly([rat(frac(c)) for c in expr_or_coeffs], gen, domain=QQ)
    return Poly(expr_or_coeffs, gen, domain=QQ)


def constant(value) -> Poly:
    return Poly(rat(frac(value)), X, domain=QQ)


def is_squarefree(p: Poly) -> bool:
    return p.gcd(p.diff()).degree() == 0


def irreducible_factors(p: Poly) -> List[Poly]:
    """Distinct monic irreducible factors of p over QQ."""
    _, factors = p.factor_list()
    return [poly(f.as_expr()).monic() for f, _ in factors if f.degree() > 0]


def weights(bound: int) -> Iterator[int]:
    """Deterministic primitive-element weights 1, -1, 2, -2, ..., bound, -bound."""
    for w in range(1, bound + 1):
        yield w
        yield -w


# ----------------------------------------------------------- Interval arithmetic ---

def interval_add(a: Interval, b: Interval) -> Interval:
    return a[0] + b[0], a[1] + b[1]


def interval_scale(a: Interval, c: Fraction) -> Interval:
    lo, hi = a[0] * c, a[1] * c
    return (lo, hi) if lo <= hi else (hi, lo)


def interval_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def interval_eval(p: Poly, box: Interval) -> Interval:
    """Enclosure of p over the box, by Horner's rule with exact endpoints."""
    coeffs = [frac(c) for c in p.all_coeffs()]
    acc = (coeffs[0], coeffs[0])
    for c in coeffs[1:]:
        lo, hi = interval_mul(acc, box)
        acc = (lo + c, hi + c)
    return acc


def sqrt_bounds(value: Fraction, bits: int) -> Interval:
    """Rational lower/upper bounds of sqrt(value) with width about 2^-bits."""
    if value <= 0:
        return Fraction(0), Fraction(0)
    num, den = value.numerator, value.denominator
    scale = 1 << bits
    root = math.isqrt(num * den * scale * scale)
    return Fraction(root, den * scale), Fraction(root + 1, den * scale)


# ---------------------------------------------------------------- Root isolation ---

def isolate_roots(p: Poly) -> List[Tuple[Interval, int]]:
    """Sorted isolating intervals of the distinct real roots of p, with multiplicities."""
    if p.is_zero:
        raise AlgebraError("cannot isolate the roots of the zero polynomial")
    if p.degree() <= 0:
        return []
    return [((frac(s), frac(t)), k) for (s, t), k in p.intervals()]


def select_root(candidates: Sequence[Poly],
                enclose: Callable[[int], Interval],
                bits: int = 16) -> Tuple[Poly, Fraction, Fraction]:
    """Pick the unique real root of the candidates lying in a shrinking enclosure.

    ``enclose(bits)`` must return an interval of width about 2^-bits that
    contains the target value; the candidates must be pairwise coprime and
    contain the target among their roots.
    """
    while True:
        lo, hi = enclose(bits)
        eps = max(hi - lo, Fraction(1, 1 << bits))
        hits = []
        for f in candidates:
            for (s, t), _ in f.intervals(eps=rat(eps)):
                s, t = frac(s), frac(t)
                if s <= hi and lo <= t:
                    hits.append((f, s, t))
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise InternalCheckError("enclosure does not meet any candidate root")
        bits *= 2


# ------------------------------------------------------------------- Cyclotomics ---

@lru_cache(maxsize=None)
def real_cyclotomic(n: int) -> Poly:
    """Minimal polynomial of 2cos(2*pi/n), from the n-th cyclotomic polynomial.

    The roots of res_z(Phi_n(z), z^2 - x z + 1) are the values z + 1/z, each
    appearing twice; its square-free part is the minimal polynomial.
    """
    if n < 1:
        raise AlgebraError(f"cyclotomic index must be positive, got {n}")
    if n == 1:
        return poly(X - 2)
    if n == 2:
        return poly(X + 2)
    res = poly(resultant(cyclotomic_poly(n, Z), Z ** 2 - X * Z + 1, Z))
    return res.sqf_part().monic()


def coprime_residues(n: int) -> List[int]:
    """k in [1, n/2) with gcd(k, n) = 1, ascending."""
    return [k for k in range(1, (n + 1) // 2) if 2 * k < n and math.gcd(k, n) == 1]


def substitute(p: Poly, value):
    """p(value) as a sympy expression."""
    return p.as_expr().subs(X, value)
