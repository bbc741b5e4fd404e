"""Base-distance geometry: systole bounds, glued prisms and field separation."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
from sympy import Symbol, lambdify, sympify

from .algebra import (
    AlgebraicReal, FieldElement, NumberField, algebraic_from_expr, cos_pi_over,
    cos_rational_pi, embed, field_with_embeddings, fields_equal, sqrt_of,
)
from .catalog import Catalog, PrismSpec
from .errors import GlueError, InternalCheckError, InvalidSpecError, NotInFieldError, SolveError
from .gram import (
    CoxeterDiagram, Dashed, GramMatrix, GramTemplate, build_template, det_in_t,
    determinant, field_pair, ground_field, known_products,
)
from .vinberg import Verdict, classify_gram, solve_spec

logger = logging.getLogger(__name__)

GLUEABLE_FAMILIES = (1, 2, 3)

# e = cos(pi/m), C = cos(2 pi/m)
E = Symbol("e")
C = Symbol("C")


@dataclass(frozen=True)
class ClosedForm:
    family: int
    k: int
    l: int
    printed: str
    corrected: Optional[str] = None

    @property
    def formula(self) -> str:
        return self.corrected or self.printed

    def expression(self, printed: bool = False):
        return sympify(self.printed if printed else self.formula, locals={"e": E, "C": C})


_FORMS = [
    ClosedForm(1, 2, 3, "(3*C - 1)/(4*C - 2)"),
    ClosedForm(1, 2, 4, "(3*C + 1)/(4*C)"),
    ClosedForm(1, 2, 5, "(3*C + sqrt(5))/(4*C + sqrt(5) - 1)"),
    ClosedForm(1, 3, 3, "(1 - 3*e)/(2 - 4*e)"),
    ClosedForm(1, 3, 4, "(3*e**2 + 2*sqrt(2)*e)/(4*e**2 + 2*sqrt(2)*e - 1)"),
    ClosedForm(1, 3, 5,
               "(6*e**2 + 2*e + 2*sqrt(5)*e - 1)/(8*e**2 + 2*sqrt(5)*e + 2*e - 3)",
               "(6*e**2 + 2*(1 + sqrt(5))*e + sqrt(5) - 1)/(8*e**2 + 2*(1 + sqrt(5))*e + sqrt(5) - 3)"),
    ClosedForm(1, 4, 4, "(3*e + 1)/(4*e)"),
    ClosedForm(1, 4, 5,
               "(sqrt(5) + 3*e)/(sqrt(5) + 4*e - 1)",
               "(6*e**2 + 2*sqrt(2)*(1 + sqrt(5))*e + sqrt(5) + 1)"
               "/(8*e**2 + 2*sqrt(2)*(1 + sqrt(5))*e + sqrt(5) - 1)"),
    ClosedForm(1, 5, 5, "(3*e + sqrt(5))/(4*e + sqrt(5) - 1)"),
    ClosedForm(2, 2, 3, "(2*e**2 - 1)/(4*e**2 - 3)"),
    ClosedForm(2, 3, 3, "e/(2*e - 1)"),
    ClosedForm(3, 2, 3, "((5 - sqrt(5))*e**2 + sqrt(5) - 3)/(8*e**2 - 6)"),
    ClosedForm(3, 3, 3, "((5 - sqrt(5))*e + sqrt(5) - 1)/(8*e - 4)"),
]

CLOSED_FORMS: Dict[Tuple[int, int, int], ClosedForm] = {(f.family, f.k, f.l): f for f in _FORMS}
CLOSED_FORMS_FAMILIES = frozenset(f.family for f in _FORMS)


def closed_form(family: int, k: int, l: int) -> ClosedForm:
    key = (family, min(k, l), max(k, l))
    if key not in CLOSED_FORMS:
        raise InvalidSpecError(f"no closed form for type {family} ({k},{l},m)")
    return CLOSED_FORMS[key]


def closed_form_value(family: int, k: int, l: int, m: int, printed: bool = False) -> AlgebraicReal:
    """The closed form for cosh^2 d evaluated exactly at m."""
    expr = closed_form(family, k, l).expression(printed)
    return algebraic_from_expr(expr, {E: cos_pi_over(m), C: cos_rational_pi(2 * Fraction(1, m))})


def closed_form_check(family: int, k: int, l: int, m: int, catalog: Catalog,
                      printed: bool = False) -> bool:
    """Whether the solved a^2 equals the closed form at m, exactly."""
    spec = catalog.make_spec(family, k, l, m)
    computed = solve_spec(spec, catalog).a_squared
    expected = closed_form_value(family, k, l, m, printed)
    if computed != expected:
        logger.info("%s: a^2 = %s but the closed form gives %s", spec.label, computed, expected)
        return False
    return True


# ------------------------------------------------------------------- Systoles ---

def bound_from_cosh(a, digits: int = 50) -> mpmath.mpf:
    with mpmath.workdps(digits):
        return 2 * mpmath.acosh(a)


def systole_upper_bound(spec: PrismSpec, catalog: Catalog, digits: int = 50) -> mpmath.mpf:
    """2 * arccosh(a), twice the distance between the two bases."""
    a = solve_spec(spec, catalog).a
    return bound_from_cosh(a.to_mpf(digits + 10), digits)


@dataclass(frozen=True)
class LimitRow:
    family: int
    k: int
    l: int
    m: int
    cosh2: mpmath.mpf
    bound: mpmath.mpf
    exact: Optional[AlgebraicReal] = None

    def to_dict(self, digits: int = 50) -> dict:
        return {
            "family": self.family, "k": self.k, "l": self.l, "m": self.m,
            "cosh2_d_exact": "" if self.exact is None else str(self.exact),
            "cosh2_d_decimal": mpmath.nstr(self.cosh2, digits),
            "bound_decimal": mpmath.nstr(self.bound, digits),
        }


def _numeric_form(family: int, k: int, l: int) -> Callable:
    return lambdify((E, C), closed_form(family, k, l).expression(), "mpmath")


def systole_limit_report(family: int, k: int, l: int, m_max: int, catalog: Catalog,
                         digits: int = 50, exact_up_to: int = 30,
                         m_values: Optional[Iterable[int]] = None) -> List[LimitRow]:
    """cosh^2 d and the systole bound for each legal m up to m_max.

    Values come from the closed form at ``digits`` precision; rows with
    m <= exact_up_to also carry the exactly solved a^2.
    """
    template = catalog.template(family)
    if family not in CLOSED_FORMS_FAMILIES:
        raise InvalidSpecError(f"type {family} has no closed form in m")
    evaluate = _numeric_form(family, k, l)
    if m_values is None:
        m_values = range(2, m_max + 1)
    rows = []
    for m in m_values:
        try:
            spec = template.spec({"k": k, "l": l, "m": m})
        except InvalidSpecError:
            continue
        with mpmath.workdps(digits + 10):
            cosh2 = evaluate(mpmath.cos(mpmath.pi / m), mpmath.cos(2 * mpmath.pi / m))
            bound = bound_from_cosh(mpmath.sqrt(cosh2), digits + 10)
        exact = solve_spec(spec, catalog).a_squared if m <= exact_up_to else None
        rows.append(LimitRow(family, spec.k, spec.l, m, cosh2, bound, exact))
    return rows


# ------------------------------------------------------------------- Gluing ---

def cosh_sum(a1: AlgebraicReal, a2: AlgebraicReal) -> AlgebraicReal:
    """cosh(d1 + d2) from cosh d1 and cosh d2."""
    a1, a2 = AlgebraicReal.coerce(a1), AlgebraicReal.coerce(a2)
    return a1 * a2 + ((a1 * a1 - 1) * (a2 * a2 - 1)).sqrt()


@dataclass(frozen=True)
class GluedPrism:
    """Two straight prisms with a common base triangle glued along the shared bottom base.

    Nodes 0-2 are the shared laterals, 3 and 4 the two tops. With q1 = a1^2
    and q2 = a2^2 the top-top entry is -(rho + sqrt(q1 q2)) where
    rho = sinh d1 sinh d2 lies in the template field.
    """

    left: PrismSpec
    right: PrismSpec
    template: GramTemplate
    q1: FieldElement
    q2: FieldElement
    rho: FieldElement
    flagged: bool = False

    @property
    def field(self) -> NumberField:
        return self.template.field

    @property
    def radicand(self) -> FieldElement:
        return self.q1 * self.q2

    def top_entry(self) -> AlgebraicReal:
        """cosh(d1 + d2)."""
        f = self.field
        return f.to_real(self.rho) + f.to_real(self.radicand).sqrt()

    def gram(self) -> GramMatrix:
        f = self.field
        root = f.express(f.to_real(self.radicand).sqrt())
        if root is not None:
            field_, lift, t = f, (lambda e: e), self.rho + root
        else:
            ext = f.adjoin_sqrt(self.radicand)
            field_, lift = ext.field, ext.lift
            t = lift(self.rho) + ext.value
        entries = tuple(tuple(-t if e is None else lift(e) for e in row)
                        for row in self.template.entries)
        return GramMatrix(field_, entries, self.template.dimension)


def glued_diagram(left: CoxeterDiagram, right: CoxeterDiagram) -> CoxeterDiagram:
    laterals = {(i, j, label) for i, j, label in left.edges if max(i, j) < 3}
    if laterals != {(i, j, label) for i, j, label in right.edges if max(i, j) < 3}:
        raise GlueError("the two prisms have different lateral facets")
    edges = sorted(laterals)
    for diagram, top in ((left, 3), (right, 4)):
        for i, j, label in diagram.edges:
            if isinstance(label, Dashed):
                continue
            if max(i, j) == 3:
                edges.append((min(i, j), top, label))
    edges.append((3, 4, Dashed()))
    return CoxeterDiagram.build(5, edges, 3)


def _sub_determinant(template: GramTemplate, nodes: Sequence[int]) -> FieldElement:
    rows = [[template.entries[i][j] for j in nodes] for i in nodes]
    return determinant(rows, template.field.one)


def glue(left: PrismSpec, right: PrismSpec, catalog: Catalog) -> GluedPrism:
    for spec in (left, right):
        if spec.family not in GLUEABLE_FAMILIES:
            raise GlueError(f"{spec.label}: only types 1-3 share a perpendicular of base and top")
    if left.params != right.params:
        raise GlueError(f"base triangles differ: {left.params} and {right.params}")
    flagged = not (left.family in (1, 2) and right.family == 3)
    if flagged:
        logger.warning("gluing %s to %s is outside the obstruction's pairs", left.label, right.label)

    diagram = glued_diagram(catalog.diagram_for(left), catalog.diagram_for(right))
    template = build_template(diagram, 3)
    f = template.field
    lateral = _sub_determinant(template, (0, 1, 2))
    q1 = _sub_determinant(template, (0, 1, 2, 3)) / lateral
    q2 = _sub_determinant(template, (0, 1, 2, 4)) / lateral

    quad = det_in_t(template)
    if quad.c2.is_zero:
        raise InternalCheckError("glued determinant is not quadratic in the top-top weight")
    rho = -quad.c1 / (quad.c2 * 2)
    if rho * rho != (q1 - 1) * (q2 - 1) or f.sign_at(rho, f.identity) <= 0:
        raise InternalCheckError("half root sum of the glued quadratic is not sinh d1 sinh d2")
    if quad.c0 / quad.c2 != 1 - q1 - q2:
        raise InternalCheckError("root product of the glued quadratic is not 1 - a1^2 - a2^2")
    logger.debug("glued %s and %s over a field of degree %d", left.label, right.label, f.degree)
    return GluedPrism(left, right, template, q1, q2, rho, flagged)


@dataclass(frozen=True)
class ObstructionRecord:
    j: int
    k: int
    l: int
    m: int
    applicable: bool
    verdict: Optional[Verdict] = None
    sqrt5_in_ground_field: Optional[bool] = None
    sqrt5_in_triangle_field: Optional[bool] = None
    triangle_field: Optional[NumberField] = None
    certificate: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "j": self.j, "k": self.k, "l": self.l, "m": self.m,
            "applicable": self.applicable,
            "verdict": None if self.verdict is None else self.verdict.value,
            "sqrt5_in_kP": self.sqrt5_in_ground_field,
            "sqrt5_in_kF": self.sqrt5_in_triangle_field,
            "kF": None if self.triangle_field is None else self.triangle_field.describe(),
            "certificate": self.certificate,
        }


def triangle_ground_field(k: int, l: int, m: int) -> NumberField:
    """k(F) of the (k,l,m) triangle group, from cos(2pi/n) and the cos(pi/n) product."""
    values = [cos_rational_pi(2 * Fraction(1, n)) for n in (k, l, m)]
    values.append(cos_pi_over(k) * cos_pi_over(l) * cos_pi_over(m))
    return field_with_embeddings(values)


def _member(value: AlgebraicReal, field_: NumberField) -> bool:
    try:
        image = embed(value, field_, field_.identity)
    except NotInFieldError:
        return False
    if image != value:
        raise InternalCheckError(f"identity embedding of {field_.describe(12)} moves {value}")
    return True


def glued_obstruction_check(j: int, k: int, l: int, m: int, catalog: Catalog,
                            full: bool = False, direct: bool = False) -> ObstructionRecord:
    """Certify that gluing a type j prism (j = 1, 2) to a type 3 prism is not quasi-arithmetic.

    The ground field of the glued prism contains sqrt(5) while the ground
    field of its base triangle does not when 5 does not divide m. With
    ``full`` k(P) itself is computed; ``direct`` also runs V1 and V2 on the
    glued Gram matrix and requires the same verdict.
    """
    if j not in (1, 2):
        raise InvalidSpecError(f"j must be 1 or 2, got {j}")
    if m % 5 == 0:
        return ObstructionRecord(j, k, l, m, applicable=False)
    glued = glue(catalog.make_spec(j, k, l, m), catalog.make_spec(3, k, l, m), catalog)
    sqrt5 = sqrt_of(5)
    certificate: Dict = {"glue_identities": "verified"}

    if full:
        pair = field_pair(glued.gram())
        in_kp = _member(sqrt5, pair.k)
        certificate["kP"] = pair.k.describe()
    else:
        sub = glued.field.subfield(p.value for p in known_products(glued.template))
        in_kp = _member(sqrt5, sub.field)
        certificate["kP_subfield"] = sub.field.describe()

    kf = triangle_ground_field(k, l, m)
    in_kf = _member(sqrt5, kf)
    certificate["kF_degree"] = kf.degree
    if not in_kp or in_kf:
        raise InternalCheckError(f"obstruction fails for ({j},{k},{l},{m}): "
                                 f"sqrt5 in k(P) {in_kp}, in k(F) {in_kf}")

    if direct:
        verdict, _, conditions, witness = classify_gram(glued.gram())
        if verdict is not Verdict.NOT_QUASI_ARITHMETIC:
            raise InternalCheckError(f"direct run on the glued ({j},{k},{l},{m}) prism gives {verdict.value}")
        certificate["direct"] = {"conditions": conditions, "witness": witness}
    logger.info("glued (%d,%d,%d,%d): sqrt5 in k(P), not in k(F) = %s", j, k, l, m, kf.describe(12))
    return ObstructionRecord(j, k, l, m, True, Verdict.NOT_QUASI_ARITHMETIC, in_kp, in_kf, kf,
                             certificate)


# ----------------------------------------------------------- Commensurability ---

@dataclass
class FieldClass:
    field: NumberField
    specs: List[PrismSpec]

    @property
    def status(self) -> str:
        """Distinct ground fields separate classes; equal ones decide nothing."""
        return "undetermined" if len(self.specs) > 1 else "separated"


def prism_ground_field(spec: PrismSpec, catalog: Catalog) -> NumberField:
    solution = solve_spec(spec, catalog)
    try:
        return ground_field(solution)
    except SolveError:
        return field_pair(solution.gram()).k


def commensurability_separation(specs: Sequence[PrismSpec], catalog: Catalog) -> List[FieldClass]:
    """Group specs by ground field; specs in different groups are incommensurable."""
    classes: List[FieldClass] = []
    for spec in specs:
        k = prism_ground_field(spec, catalog)
        for group in classes:
            if fields_equal(group.field, k):
                group.specs.append(spec)
                break
        else:
            classes.append(FieldClass(k, [spec]))
    logger.info("%d specs fall into %d ground-field classes", len(specs), len(classes))
    return classes


def family_field_comparison(j: int, k: int, l: int, m: int, catalog: Catalog) -> bool:
    """Whether the type j and type 3 prisms over the same triangle share a ground field."""
    first = prism_ground_field(catalog.make_spec(j, k, l, m), catalog)
    second = prism_ground_field(catalog.make_spec(3, k, l, m), catalog)
    return fields_equal(first, second)

