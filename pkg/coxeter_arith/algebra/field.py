"""Real number fields Q(theta) with exact element arithmetic.

A field is fixed by the minimal polynomial of a primitive element theta and
the real root that theta denotes. Elements are polynomials in theta reduced
modulo the minimal polynomial. Extensions are built with a primitive element
theta + c*alpha, the weight c taken from 1, -1, 2, -2, ... up to a bound.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ, Poly, expand, factorint, resultant
from sympy.polys.matrices import DomainMatrix

from ..config import AlgebraConfig
from ..errors import AlgebraError, InternalCheckError, NotInFieldError
from .polys import (
    X, Y, Z, Interval, constant, frac, interval_add, interval_eval,
    interval_scale, irreducible_factors, is_squarefree, poly, rat, select_root,
    substitute, weights,
)
from .real import AlgebraicReal

logger = logging.getLogger(__name__)

_settings = AlgebraConfig()


def configure(config: AlgebraConfig) -> None:
    """Install the weight bound and refinement width used by default."""
    global _settings
    _settings = config


def _bound(weight_bound: Optional[int]) -> int:
    return _settings.weight_bound if weight_bound is None else weight_bound


# ------------------------------------------------------------------ Elements ---

@dataclass(frozen=True, eq=False)
class FieldElement:
    field: "NumberField"
    rep: Poly

    def _rep_of(self, other) -> Poly:
        if isinstance(other, FieldElement):
            if not self.field.same_as(other.field):
                raise AlgebraError("elements of different fields")
            return other.rep
        return constant(other)

    def _wrap(self, rep: Poly) -> "FieldElement":
        return FieldElement(self.field, rep.rem(self.field.min_poly))

    def __add__(self, other) -> "FieldElement":
        return self._wrap(self.rep + self._rep_of(other))

    __radd__ = __add__

    def __sub__(self, other) -> "FieldElement":
        return self._wrap(self.rep - self._rep_of(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._wrap(self._rep_of(other) - self.rep)

    def __mul__(self, other) -> "FieldElement":
        return self._wrap(self.rep * self._rep_of(other))

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, -self.rep)

    def __truediv__(self, other) -> "FieldElement":
        return self._wrap(self.rep * _invert(self._rep_of(other), self.field.min_poly))

    def __rtruediv__(self, other) -> "FieldElement":
        return self._wrap(self._rep_of(other) * _invert(self.rep, self.field.min_poly))

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return (1 / self) ** (-exponent)
        return self._wrap(self.rep.pow(exponent) if exponent else constant(1))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field.same_as(other.field) and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.rep.all_coeffs()))

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    @property
    def is_rational(self) -> bool:
        return self.rep.degree() <= 0

    @property
    def rational(self) -> Fraction:
        if not self.is_rational:
            raise AlgebraError("element is not rational")
        return Fraction(0) if self.rep.is_zero else frac(self.rep.LC())

    def __repr__(self) -> str:
        return f"FieldElement({self.rep.as_expr()} mod {self.field.min_poly.as_expr()})"


def _invert(p: Poly, modulus: Poly) -> Poly:
    if p.is_zero:
        raise AlgebraError("division by zero")
    if p.degree() <= 0:
        return constant(1 / frac(p.LC()))
    return p.invert(modulus)


# ------------------------------------------------------------------- Fields ---

@dataclass(frozen=True, eq=False)
class NumberField:
    """Q(theta) for a real algebraic theta, with its real embeddings.

    ``embeddings`` lists the real roots of ``min_poly`` ascending; ``identity``
    is the index of theta among them. ``generators`` records the numbers the
    field was built from with their expressions in theta.
    """

    min_poly: Poly
    primitive: AlgebraicReal
    embeddings: Tuple[AlgebraicReal, ...]
    identity: int
    generators: Tuple[Tuple[AlgebraicReal, Poly], ...] = ()

    @classmethod
    def from_primitive(cls, theta: AlgebraicReal,
                       generators: Sequence[Tuple[AlgebraicReal, Poly]] = ()) -> "NumberField":
        if theta.is_rational:
            return replace(RATIONALS, generators=tuple(generators))
        roots = tuple(theta.conjugates())
        identity = next(i for i, r in enumerate(roots) if r == theta)
        return cls(theta.min_poly, theta, roots, identity, tuple(generators))

    def with_generators(self, generators: Sequence[Tuple[AlgebraicReal, Poly]]) -> "NumberField":
        return replace(self, generators=tuple(generators))

    def same_as(self, other: "NumberField") -> bool:
        return self is other or (self.min_poly == other.min_poly
                                 and self.identity == other.identity)

    @property
    def degree(self) -> int:
        return self.min_poly.degree()

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def is_totally_real(self) -> bool:
        return len(self.embeddings) == self.degree

    # ---------------------------------------------------------------- elements ---

    def element(self, rep) -> FieldElement:
        rep = rep if isinstance(rep, Poly) else poly(rep)
        return FieldElement(self, rep.rem(self.min_poly))

    def rational(self, value) -> FieldElement:
        return FieldElement(self, constant(value))

    @property
    def zero(self) -> FieldElement:
        return self.rational(0)

    @property
    def one(self) -> FieldElement:
        return self.rational(1)

    @property
    def theta(self) -> FieldElement:
        return self.element(poly(X))

    def generator_elements(self) -> List[FieldElement]:
        return [self.element(rep) for _, rep in self.generators]

    def coordinates(self, el: FieldElement) -> List[Fraction]:
        """Coefficients of el in the basis 1, theta, ..., theta^(n-1)."""
        coeffs = [frac(c) for c in reversed(el.rep.all_coeffs())] if not el.is_zero else []
        return coeffs + [Fraction(0)] * (self.degree - len(coeffs))

    # --------------------------------------------------------- linear algebra ---

    def multiplication_matrix(self, el: FieldElement) -> DomainMatrix:
        n = self.degree
        columns = []
        current = el.rep
        for _ in range(n):
            columns.append(self.coordinates(FieldElement(self, current)))
            current = (current * poly(X)).rem(self.min_poly)
        rows = [[QQ(columns[c][r].numerator, columns[c][r].denominator) for c in range(n)]
                for r in range(n)]
        return DomainMatrix(rows, (n, n), QQ)

    def charpoly(self, el: FieldElement) -> Poly:
        """Characteristic polynomial of multiplication by el (the field norm form)."""
        coeffs = self.multiplication_matrix(el).charpoly()
        return Poly([QQ.to_sympy(c) for c in coeffs], X, domain=QQ)

    def minpoly(self, el: FieldElement) -> Poly:
        if el.is_rational:
            return poly([1, -el.rational])
        return self.charpoly(el).sqf_part().monic()

    def is_integral(self, el: FieldElement) -> bool:
        return all(frac(c).denominator == 1 for c in self.charpoly(el).all_coeffs())

    def _solve(self, basis: Sequence[Sequence[Fraction]],
               target: Sequence[Fraction]) -> Optional[List[Fraction]]:
        """Rational x with sum x_i basis_i = target, or None if target is outside the span."""
        n, k = self.degree, len(basis)
        rows = [[basis[i][r] for i in range(k)] + [target[r]] for r in range(n)]
        dm = DomainMatrix([[QQ(v.numerator, v.denominator) for v in row] for row in rows],
                          (n, k + 1), QQ)
        reduced, pivots = dm.rref()
        if k in pivots:
            return None
        mat = reduced.to_Matrix()
        solution = [Fraction(0)] * k
        for row, col in enumerate(pivots):
            solution[col] = frac(mat[row, k])
        return solution

    def _power_basis(self, el: FieldElement) -> List[List[Fraction]]:
        size = self.minpoly(el).degree()
        basis, power = [], self.one
        for _ in range(size):
            basis.append(self.coordinates(power))
            power = power * el
        return basis

    # ------------------------------------------------------- real embeddings ---

    def probe(self, index: Optional[int] = None) -> "Probe":
        return Probe(self, self.identity if index is None else index)

    def value_at(self, el: FieldElement, index: int) -> AlgebraicReal:
        return self.probe(index).value(el)

    def to_real(self, el: FieldElement) -> AlgebraicReal:
        """The real number el denotes under the identity embedding."""
        return self.value_at(el, self.identity)

    def sign_at(self, el: FieldElement, index: int) -> int:
        return self.probe(index).sign(el)

    # ---------------------------------------------------------- membership ---

    def express(self, value, weight_bound: Optional[int] = None) -> Optional[FieldElement]:
        """value as an element of this field, or None when it lies outside."""
        value = AlgebraicReal.coerce(value)
        if value.is_rational:
            return self.rational(value.rational)
        if self.degree % value.degree:
            return None
        return self._recover(value, _adjoin(self, value, None, _bound(weight_bound)))

    def contains(self, value, weight_bound: Optional[int] = None) -> bool:
        return self.express(value, weight_bound) is not None

    def _recover(self, value: AlgebraicReal, adj: "_Adjunction") -> Optional[FieldElement]:
        if adj.theta.degree != self.degree:
            return None
        shifted = expand(substitute(adj.theta.min_poly, Z + adj.weight * Y))
        right = [poly(c.subs(Z, X)) for c in Poly(shifted, Y).all_coeffs()]
        left = [constant(c) for c in value.min_poly.all_coeffs()]
        return self.element(_common_root(left, right, self.min_poly))

    # ---------------------------------------------------------- extensions ---

    def adjoin(self, value, weight_bound: Optional[int] = None,
               relative: Optional[Sequence[Poly]] = None) -> "FieldExtension":
        """Extension by a real number.

        ``relative`` gives the coefficients (highest first, as polynomials in
        theta) of a monic polynomial over this field vanishing at ``value``;
        by default the rational minimal polynomial of ``value`` is used.
        """
        value = AlgebraicReal.coerce(value)
        adj = _adjoin(self, value, relative, _bound(weight_bound))
        return self._extension(adj)

    def _extension(self, adj: "_Adjunction") -> "FieldExtension":
        field = NumberField.from_primitive(adj.theta)
        return FieldExtension(self, field, field.element(adj.old_theta), field.element(adj.value))

    def adjoin_sqrt(self, el: FieldElement, weight_bound: Optional[int] = None) -> "FieldExtension":
        """Extension by the positive square root of el (positive at the identity embedding)."""
        value = self.to_real(el).sqrt()
        relative = [constant(1), constant(0), -el.rep]
        return self.adjoin(value, weight_bound, relative)

    def subfield(self, elements: Iterable[FieldElement],
                 weight_bound: Optional[int] = None) -> "Subfield":
        """The subfield generated over Q by the given elements."""
        distinct: List[FieldElement] = []
        for el in elements:
            if not el.is_rational and all(el != d for d in distinct):
                distinct.append(el)
        if not distinct:
            return Subfield(RATIONALS, self.zero)

        primitive = distinct[0]
        basis = self._power_basis(primitive)
        for g in distinct[1:]:
            if self._solve(basis, self.coordinates(g)) is not None:
                continue
            for c in weights(_bound(weight_bound)):
                candidate = primitive + g * c
                candidate_basis = self._power_basis(candidate)
                if (self._solve(candidate_basis, self.coordinates(primitive)) is not None
                        and self._solve(candidate_basis, self.coordinates(g)) is not None):
                    primitive, basis = candidate, candidate_basis
                    break
            else:
                raise AlgebraError("no primitive element for the subfield within the weight bound")
        sub = NumberField.from_primitive(self.to_real(primitive))
        logger.debug("subfield of degree %d inside degree %d", sub.degree, self.degree)
        return Subfield(sub, primitive)

    # --------------------------------------------------------------- display ---

    def describe(self, digits: int = 20) -> str:
        if self.is_rational:
            return "Q"
        if self.degree == 2:
            _, b, c = (frac(v) for v in self.min_poly.all_coeffs())
            disc = b * b - 4 * c
            radicand = 1
            for p, e in factorint(disc.numerator * disc.denominator).items():
                if e % 2 and p != -1:
                    radicand *= p
            return f"Q(sqrt({radicand}))"
        _, primitive = self.min_poly.clear_denoms()
        return (f"Q(theta), theta ~ {self.primitive.to_mpf(digits)} "
                f"root of {primitive.as_expr()}")

    def __repr__(self) -> str:
        return f"NumberField(degree={self.degree}, {self.describe(12)})"


RATIONALS = NumberField(poly(X), AlgebraicReal.from_rational(0),
                        (AlgebraicReal.from_rational(0),), 0)


@dataclass(frozen=True)
class FieldExtension:
    """A field together with the image of the base primitive element and of the adjoined value."""

    base: NumberField
    field: NumberField
    theta_image: FieldElement
    value: FieldElement

    def lift(self, el: FieldElement) -> FieldElement:
        if el.is_rational:
            return self.field.rational(el.rational)
        return self.field.element(el.rep.compose(self.theta_image.rep))


@dataclass(frozen=True)
class Subfield:
    """A subfield and its primitive element written in the ambient field."""

    field: NumberField
    primitive: FieldElement


class Probe:
    """Sign, value and root-index queries at one real embedding.

    Enclosures of the embedded primitive element are cached per instance.
    """

    def __init__(self, field: NumberField, index: int):
        self.field = field
        self.index = index
        self._root = field.embeddings[index]
        self._boxes: Dict[int, Interval] = {}
        self._minpolys: Dict[tuple, Poly] = {}

    def box(self, bits: int) -> Interval:
        if bits not in self._boxes:
            self._boxes[bits] = self._root.enclosure(bits)
        return self._boxes[bits]

    def enclose(self, el: FieldElement, bits: int) -> Interval:
        return interval_eval(el.rep, self.box(bits))

    def minpoly(self, el: FieldElement) -> Poly:
        key = tuple(el.rep.all_coeffs())
        if key not in self._minpolys:
            self._minpolys[key] = self.field.minpoly(el)
        return self._minpolys[key]

    def sign(self, el: FieldElement) -> int:
        if el.is_rational:
            r = el.rational
            return (r > 0) - (r < 0)
        bits = _settings.refine_bits
        while True:
            lo, hi = self.enclose(el, bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def value(self, el: FieldElement) -> AlgebraicReal:
        if el.is_rational:
            return AlgebraicReal.from_rational(el.rational)
        f, s, t = select_root([self.minpoly(el)], lambda bits: self.enclose(el, bits))
        return AlgebraicReal.from_root(f, s, t)

    def root_index(self, el: FieldElement) -> int:
        """Position of the image of el among the ascending real roots of its minimal polynomial."""
        if el.is_rational:
            return 0
        image = self.value(el)
        return image.min_poly.count_roots(None, rat(image.lo))


# --------------------------------------------------------- primitive elements ---

@dataclass(frozen=True)
class _Adjunction:
    theta: AlgebraicReal     # base primitive + weight * value
    weight: int
    old_theta: Poly          # base primitive as a polynomial in theta
    value: Poly              # adjoined value as a polynomial in theta


def _adjoin(base: NumberField, value: AlgebraicReal,
            relative: Optional[Sequence[Poly]], weight_bound: int) -> _Adjunction:
    if relative is None:
        relative = [constant(c) for c in value.min_poly.all_coeffs()]
    d = len(relative) - 1
    n = base.degree
    base_z = substitute(base.min_poly, Z)
    h = sum(substitute(coef, Z) * Y ** (d - i) for i, coef in enumerate(relative))

    for c in weights(weight_bound):
        lifted = expand(c ** d * h.subs(Y, (X - Z) / c))
        norm = poly(resultant(base_z, lifted, Z))
        if norm.degree() != n * d or not is_squarefree(norm):
            continue

        def enclose(bits: int, c=c) -> Interval:
            return interval_add(base.primitive.enclosure(bits),
                                interval_scale(value.enclosure(bits), Fraction(c)))

        f, s, t = select_root(irreducible_factors(norm), enclose)
        theta = AlgebraicReal.from_root(f, s, t)
        left = [constant(k) for k in poly(base_z, Z).all_coeffs()]
        right = [poly(k) for k in Poly(lifted, Z).all_coeffs()]
        old_theta = _common_root(left, right, f)
        adjoined = ((poly(X) - old_theta) * constant(Fraction(1, c))).rem(f)
        logger.debug("adjoined degree-%d value with weight %d: degree %d", value.degree, c,
                     theta.degree)
        return _Adjunction(theta, c, old_theta, adjoined)
    raise AlgebraError(f"no primitive element with weight up to {weight_bound}")


def _strip(coeffs: List[Poly], modulus: Poly) -> List[Poly]:
    out = [c.rem(modulus) for c in coeffs]
    while out and out[0].is_zero:
        out.pop(0)
    return out


def _rem(f: List[Poly], g: List[Poly], modulus: Poly) -> List[Poly]:
    """Remainder of f by g, both polynomials over Q[x]/modulus (coefficients highest first)."""
    lead_inv = _invert(g[0], modulus)
    f = list(f)
    while len(f) >= len(g):
        q = (f[0] * lead_inv).rem(modulus)
        for i, gc in enumerate(g):
            f[i] = f[i] - q * gc
        f = _strip(f, modulus)
    return f


def _common_root(f: List[Poly], g: List[Poly], modulus: Poly) -> Poly:
    """The unique common root over Q[x]/modulus of f and g, via their gcd."""
    f, g = _strip(f, modulus), _strip(g, modulus)
    while g:
        f, g = g, _rem(f, g, modulus)
    if len(f) != 2:
        raise InternalCheckError(f"expected a linear gcd, got degree {len(f) - 1}")
    return (-f[1] * _invert(f[0], modulus)).rem(modulus)


# ------------------------------------------------------------- module API ---

def field_with_embeddings(values: Iterable, weight_bound: Optional[int] = None) -> NumberField:
    """The field Q(values) with a primitive element and the real embeddings."""
    bound = _bound(weight_bound)
    values = [AlgebraicReal.coerce(v) for v in values]
    field = RATIONALS
    images: List[FieldElement] = []
    for v in values:
        if v.is_rational:
            images.append(field.rational(v.rational))
            continue
        seen = next((i for i, u in enumerate(values[:len(images)]) if u == v), None)
        if seen is not None:
            images.append(images[seen])
            continue
        adj = _adjoin(field, v, None, bound)
        inside = field._recover(v, adj) if field.degree % v.degree == 0 else None
        if inside is not None:
            images.append(inside)
            continue
        ext = field._extension(adj)
        images = [ext.lift(e) for e in images] + [ext.value]
        field = ext.field
    return field.with_generators([(v, e.rep) for v, e in zip(values, images)])


def contains(field: NumberField, value) -> bool:
    return field.contains(value)


def embed(value, field: NumberField, index: int) -> AlgebraicReal:
    """The image of value under the real embedding of field with the given index."""
    el = field.express(value)
    if el is None:
        raise NotInFieldError(f"{value!r} is not in {field!r}")
    return field.value_at(el, index)


def fields_equal(first: NumberField, second: NumberField) -> bool:
    if first.degree != second.degree:
        return False
    if first.is_rational:
        return True
    return first.contains(second.primitive)
