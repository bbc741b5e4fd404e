"""Vinberg's arithmeticity criterion and the classification pipeline.

V1: K(P) is totally real.
V2: for every real embedding sigma of K(P) that is not the identity on
    k(P), the conjugate Gram matrix is positive semi-definite.
V3: every cyclic product of 2G is an algebraic integer.

V1 and V2 together characterize quasi-arithmetic groups; adding V3 gives
arithmetic ones.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath

from .algebra import AlgebraicReal, NumberField, decimal
from .catalog import Catalog, PrismSpec, is_hyperbolic
from .errors import InternalCheckError, InvalidSpecError
from .gram import (
    BaseDistance, CoxeterDiagram, FieldPair, GramMatrix, characteristic_coefficients,
    cyclic_products, field_pair, gram_from_diagram, gram_of_diagram, principal_minors,
    signature, solve_base_distance,
)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    ARITHMETIC = "A"
    PROPERLY_QUASI_ARITHMETIC = "PQA"
    NOT_QUASI_ARITHMETIC = "NQA"

    @property
    def is_quasi_arithmetic(self) -> bool:
        return self is not Verdict.NOT_QUASI_ARITHMETIC


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witness: Dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict of one prism with its fields and the failing condition's witness.

    ``entries_field`` is None for reports read back from the cache, which
    keep only its degree.
    """

    spec: PrismSpec
    verdict: Verdict
    ground_field: NumberField
    a_squared: AlgebraicReal
    conditions: Dict[str, Optional[bool]]
    witness: Dict = field(default_factory=dict)
    entries_field: Optional[NumberField] = None
    entries_degree: int = 0

    def to_dict(self, digits: int = 50) -> dict:
        return {
            "family": self.spec.family,
            "params": [self.spec.k, self.spec.l, self.spec.m],
            "dimension": self.spec.dimension,
            "verdict": self.verdict.value,
            "a_squared": self.a_squared.dumps(),
            "a_squared_decimal": decimal(self.a_squared, digits),
            "ground_field": describe_field(self.ground_field),
            "entries_field_degree": self.entries_degree,
            "conditions": dict(self.conditions),
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, data: dict, spec: PrismSpec) -> "ClassificationReport":
        primitive = AlgebraicReal.loads(data["ground_field"]["primitive"])
        return cls(
            spec=spec,
            verdict=Verdict(data["verdict"]),
            ground_field=NumberField.from_primitive(primitive),
            a_squared=AlgebraicReal.loads(data["a_squared"]),
            conditions=dict(data["conditions"]),
            witness=dict(data.get("witness", {})),
            entries_degree=int(data.get("entries_field_degree", 0)),
        )


def describe_field(number_field: NumberField) -> dict:
    _, primitive = number_field.min_poly.clear_denoms()
    return {
        "description": number_field.describe(),
        "degree": number_field.degree,
        "minpoly": [str(int(c)) for c in reversed(primitive.all_coeffs())],
        "primitive": number_field.primitive.dumps(),
    }


# ------------------------------------------------------------------ Conditions ---

def check_v1(K: NumberField) -> ConditionResult:
    if K.is_totally_real:
        return ConditionResult(True)
    return ConditionResult(False, {
        "condition": "V1",
        "minpoly": str(K.min_poly.as_expr()),
        "real_roots": len(K.embeddings),
        "degree": K.degree,
    })


def is_psd_by_minors(minors: Dict[Tuple[int, ...], object], probe) -> Tuple[bool, Optional[tuple]]:
    for subset, value in minors.items():
        if probe.sign(value) < 0:
            return False, subset
    return True, None


def is_psd_by_charpoly(coefficients: Sequence, probe) -> bool:
    """det(lambda I - G) has weakly alternating coefficient signs iff G is PSD."""
    for i, c in enumerate(coefficients):
        s = probe.sign(c)
        if s != 0 and s != (-1) ** i:
            return False
    return True


def check_v2(gram: GramMatrix, pair: FieldPair) -> ConditionResult:
    """PSD of every conjugate Gram matrix under embeddings moving k(P).

    Each conjugate is tested with principal minors and with characteristic
    polynomial signs; disagreement is an internal error.
    """
    K = pair.K
    generators = pair.k_generators()
    identity = K.probe()
    reference = [identity.root_index(g) for g in generators]
    minors = principal_minors(gram)
    coefficients = characteristic_coefficients(gram)
    checked = []
    for index in range(len(K.embeddings)):
        if index == K.identity:
            continue
        probe = K.probe(index)
        if [probe.root_index(g) for g in generators] == reference:
            continue
        by_minors, subset = is_psd_by_minors(minors, probe)
        by_charpoly = is_psd_by_charpoly(coefficients, probe)
        if by_minors != by_charpoly:
            raise InternalCheckError(f"PSD tests disagree at embedding {index}")
        checked.append(index)
        if not by_minors:
            value = probe.value(minors[subset])
            return ConditionResult(False, {
                "condition": "V2",
                "embedding": index,
                "minor": list(subset),
                "minor_value": str(value.to_mpf(30)),
            })
    logger.debug("V2 holds on %d embeddings", len(checked))
    return ConditionResult(True, {"embeddings_checked": checked})


def check_v3(gram: GramMatrix) -> ConditionResult:
    field_ = gram.field
    for product in cyclic_products(gram, scale=2):
        if not field_.is_integral(product.value):
            return ConditionResult(False, {
                "condition": "V3",
                "cycle": list(product.cycle),
                "minpoly": str(field_.minpoly(product.value).as_expr()),
            })
    return ConditionResult(True)


# ------------------------------------------------------------------ Pipeline ---

def solve_spec(spec: PrismSpec, catalog: Catalog) -> BaseDistance:
    diagram = catalog.diagram_for(spec)
    return solve_base_distance(gram_from_diagram(diagram, spec.dimension))


def verdict_of(v1: ConditionResult, v2: Optional[ConditionResult],
               v3: Optional[ConditionResult]) -> Verdict:
    if not v1 or not v2:
        return Verdict.NOT_QUASI_ARITHMETIC
    return Verdict.ARITHMETIC if v3 else Verdict.PROPERLY_QUASI_ARITHMETIC


def classify_gram(gram: GramMatrix) -> Tuple[Verdict, FieldPair, Dict[str, Optional[bool]], Dict]:
    pair = field_pair(gram)
    v1 = check_v1(pair.K)
    v2 = check_v2(gram, pair) if v1 else None
    v3 = check_v3(gram) if v1 and v2 else None
    verdict = verdict_of(v1, v2, v3)
    conditions = {"V1": v1.holds, "V2": None if v2 is None else v2.holds,
                  "V3": None if v3 is None else v3.holds}
    failed = next((c for c in (v1, v2, v3) if c is not None and not c), None)
    witness = failed.witness if failed is not None else {}
    return verdict, pair, conditions, witness


def classify(spec: PrismSpec, catalog: Catalog) -> ClassificationReport:
    """Diagram, Gram matrix, base distance, fields, V1-V3 and the verdict."""
    solution = solve_spec(spec, catalog)
    gram = solution.gram()
    verdict, pair, conditions, witness = classify_gram(gram)
    if not spec.compact and verdict.is_quasi_arithmetic and not pair.k.is_rational:
        raise InternalCheckError(f"{spec.label}: noncompact quasi-arithmetic prism "
                                 f"with ground field {pair.k.describe()}")
    logger.info("%s: %s, a^2 = %s, k = %s", spec.label, verdict.value,
                solution.a_squared, pair.k.describe(12))
    return ClassificationReport(spec, verdict, pair.k, solution.a_squared, conditions, witness,
                                entries_field=pair.K, entries_degree=pair.K.degree)


Classifier = Callable[[PrismSpec], ClassificationReport]


def classify_exhaustive(catalog: Catalog, dimension: int = 3, max_m: int = 30,
                        classifier: Optional[Classifier] = None) -> List[ClassificationReport]:
    """Slow path: classify every enumerated spec without pruning."""
    run = classifier or (lambda spec: classify(spec, catalog))
    return [run(spec) for spec in catalog.enumerate(dimension, max_m)]


def classify_candidates(catalog: Catalog, dimension: int = 3,
                        classifier: Optional[Classifier] = None) -> List[ClassificationReport]:
    """Fast path: classify the finite candidate set; everything else is not quasi-arithmetic."""
    run = classifier or (lambda spec: classify(spec, catalog))
    return [run(spec) for spec in catalog.finite_qa_candidate_set(dimension)]


# ------------------------------------------------------------------ Triangles ---

def triangle_diagram(k: int, l: int, m: int) -> CoxeterDiagram:
    return CoxeterDiagram.build(3, [(0, 2, k), (1, 2, l), (0, 1, m)], 2)


def triangle_arithmetic(k: int, l: int, m: int) -> bool:
    """Whether the (k, l, m) triangle reflection group is arithmetic.

    For triangle groups quasi-arithmetic and arithmetic coincide, so V1 and
    V2 on the 3x3 Gram matrix decide.
    """
    if min(k, l, m) < 2 or not is_hyperbolic(k, l, m):
        raise InvalidSpecError(f"({k},{l},{m}) is not a hyperbolic triangle")
    gram = gram_of_diagram(triangle_diagram(k, l, m))
    if signature(gram) != (2, 1, 0):
        raise InternalCheckError(f"triangle ({k},{l},{m}) Gram matrix is not hyperbolic")
    pair = field_pair(gram)
    v1 = check_v1(pair.K)
    return bool(v1) and bool(check_v2(gram, pair))


def _cos_sign(j: int, n: int) -> int:
    """s with cos(j pi / n) = s cos(pi / n) when j = +-1 mod n, else 0."""
    r = j % (2 * n)
    if r in (1, 2 * n - 1):
        return 1
    if r in (n - 1, n + 1):
        return -1
    return 0


def _fixes_triangle_field(j: int, labels: Tuple[int, int, int]) -> bool:
    """Whether cos(pi/n) -> cos(j pi/n) is the identity on the triangle's ground field.

    The field is generated by the cos^2 of the labels and their product of
    cosines; cos^2 is fixed exactly when j = +-1 mod n.
    """
    signs = [_cos_sign(j, n) for n in labels]
    if 0 in signs:
        return False
    return 2 in labels or signs[0] * signs[1] * signs[2] == 1


def triangle_screen(k: int, l: int, m: int, digits: int = 60) -> Optional[bool]:
    """triangle_arithmetic from the cyclotomic conjugates of det G.

    The conjugates are sigma_j: cos(pi/n) -> cos(j pi/n) for j prime to
    2 lcm(k, l, m). A conjugate Gram matrix is positive definite iff its
    determinant is positive, so the group is arithmetic iff every sigma_j
    moving the ground field gives a positive determinant. Returns None when
    some determinant is within 10^-(digits/2) of zero.
    """
    labels = (k, l, m)
    n = math.lcm(*labels)
    eps = mpmath.mpf(10) ** -(digits // 2)
    undecided = False
    with mpmath.workdps(digits):
        for j in range(3, n, 2):
            if math.gcd(j, n) != 1 or _fixes_triangle_field(j, labels):
                continue
            a, b, c = (mpmath.cos(j * mpmath.pi / x) for x in labels)
            det = 1 - a * a - b * b - c * c - 2 * a * b * c
            if det < -eps:
                return False
            if det <= eps:
                undecided = True
    return None if undecided else True


def arithmetic_triangles(max_kl: int = 5, max_m: int = 30,
                         exact: bool = False) -> List[Tuple[int, int, int]]:
    """Hyperbolic (k, l, m) with k <= l <= max_kl, m <= max_m that are arithmetic.

    triangle_screen decides each triple; triangle_arithmetic runs when the
    screen is undecided or ``exact`` is set.
    """
    found = set()
    seen = set()
    for k in range(2, max_kl + 1):
        for l in range(k, max_kl + 1):
            for m in range(2, max_m + 1):
                triple = tuple(sorted((k, l, m)))
                if triple in seen or not is_hyperbolic(k, l, m):
                    continue
                seen.add(triple)
                decided = None if exact else triangle_screen(*triple)
                if decided is None:
                    logger.debug("exact V1/V2 for triangle %s", triple)
                    decided = triangle_arithmetic(*triple)
                if decided:
                    found.add(triple)
    return sorted(found)
