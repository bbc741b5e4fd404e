"""The straight-prism families: catalog file, specs and enumerators."""

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .algebra import cos_pi_over
from .config import CatalogConfig
from .errors import DiagramError, InvalidSpecError
from .gram import CoxeterDiagram, Dashed

logger = logging.getLogger(__name__)

PARAMS = ("k", "l", "m")

# Compact arithmetic triangle groups (k, l, m) in H^2 with k <= l <= m.
ARITHMETIC_TRIANGLES: Tuple[Tuple[int, int, int], ...] = tuple(
    [(2, 3, m) for m in (7, 8, 9, 10, 11, 12, 14, 16, 18, 24, 30)]
    + [(2, 4, m) for m in (5, 6, 7, 8, 10, 12, 18)]
    + [(2, 5, m) for m in (5, 6, 8, 10, 20, 30)]
    + [(3, 3, m) for m in (4, 5, 6, 7, 8, 9, 12, 15)]
    + [(3, 4, m) for m in (4, 6, 12)]
    + [(3, 5, 5)]
    + [(4, 4, m) for m in (4, 5, 6, 9)]
    + [(4, 5, 5)]
    + [(5, 5, m) for m in (5, 10, 15)]
)

# Angle labels whose cos^2 is rational; a noncompact prism can only be
# quasi-arithmetic when its ground field is Q.
RATIONAL_SQUARE_LABELS = frozenset({2, 3, 4, 6})


def is_hyperbolic(k: int, l: int, m: int) -> bool:
    return Fraction(1, k) + Fraction(1, l) + Fraction(1, m) < 1


@dataclass(frozen=True)
class PrismSpec:
    family: int
    k: Optional[int]
    l: Optional[int]
    m: Optional[int]
    dimension: int
    compact: bool

    @property
    def params(self) -> Tuple[Optional[int], Optional[int], Optional[int]]:
        return self.k, self.l, self.m

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return self.family, self.k or 0, self.l or 0, self.m or 0

    @property
    def label(self) -> str:
        used = [str(v) for v in self.params if v is not None]
        return f"type {self.family}" + (f" ({','.join(used)})" if used else "")

    def to_dict(self) -> dict:
        return {"family": self.family, "k": self.k, "l": self.l, "m": self.m,
                "dimension": self.dimension, "compact": self.compact}


@dataclass(frozen=True)
class ParamRule:
    name: str
    kind: str                           # bound, choice or fixed
    values: Tuple[int, ...] = ()
    low: int = 2
    high: Optional[int] = None

    def admits(self, value: int) -> bool:
        if self.kind == "bound":
            return value >= self.low and (self.high is None or value <= self.high)
        return value in self.values

    def domain(self, max_m: int) -> List[int]:
        if self.kind == "bound":
            return list(range(self.low, (self.high or max_m) + 1))
        return list(self.values)


@dataclass(frozen=True)
class FamilyTemplate:
    family: int
    title: str
    dimension: int
    node_count: int
    compact: bool
    edges: Tuple[Tuple[int, int, str], ...]
    rules: Dict[str, ParamRule] = field(default_factory=dict)
    hyperbolic: Tuple[str, ...] = ()
    symmetric: Optional[Tuple[str, str]] = None
    candidates: Tuple[Tuple[int, int, int], ...] = ()

    @property
    def free(self) -> List[str]:
        return [name for name in PARAMS if name in self.rules and self.rules[name].kind != "fixed"]

    def check(self, values: Dict[str, Optional[int]]) -> None:
        for name in PARAMS:
            rule = self.rules.get(name)
            value = values.get(name)
            if rule is None:
                if value is not None:
                    raise InvalidSpecError(f"type {self.family} has no parameter {name}")
                continue
            if value is None:
                raise InvalidSpecError(f"type {self.family} needs parameter {name}")
            if not rule.admits(value):
                raise InvalidSpecError(f"type {self.family}: {name} = {value} is not allowed")
        if self.hyperbolic and not is_hyperbolic(*(values[n] for n in self.hyperbolic)):
            triple = ", ".join(str(values[n]) for n in self.hyperbolic)
            raise InvalidSpecError(f"type {self.family}: triangle ({triple}) is not hyperbolic")

    def canonical(self, values: Dict[str, Optional[int]]) -> Dict[str, Optional[int]]:
        if self.symmetric:
            a, b = self.symmetric
            if values[a] > values[b]:
                values = dict(values, **{a: values[b], b: values[a]})
        return values

    def spec(self, values: Dict[str, Optional[int]]) -> PrismSpec:
        values = {name: values.get(name) for name in PARAMS}
        for name, rule in self.rules.items():
            if rule.kind == "fixed" and values[name] is None:
                values[name] = rule.values[0]
        self.check(values)
        values = self.canonical(values)
        return PrismSpec(self.family, values["k"], values["l"], values["m"],
                         self.dimension, self.compact)

    def instantiate(self, spec: PrismSpec) -> CoxeterDiagram:
        values = dict(zip(PARAMS, spec.params))
        self.check(values)
        edges = []
        for i, j, text in self.edges:
            if text == "-":
                label = Dashed()
            elif text.startswith("slot:"):
                label = values[text[5:]]
            else:
                label = int(text)
            edges.append((i, j, label))
        return CoxeterDiagram.build(self.node_count, edges, self.dimension)

    def specs(self, max_m: int) -> List[PrismSpec]:
        names = [name for name in PARAMS if name in self.rules]
        domains = [self.rules[name].domain(max_m) for name in names]
        found = {}
        for combo in itertools.product(*domains):
            try:
                spec = self.spec(dict(zip(names, combo)))
            except InvalidSpecError:
                continue
            found[spec.key] = spec
        return [found[key] for key in sorted(found)]

    def lateral_labels(self, spec: PrismSpec) -> List[int]:
        """Labels of the edges among lateral facets and of the top's edges (dashed excluded)."""
        diagram = self.instantiate(spec)
        return [label for _, _, label in diagram.edges if isinstance(label, int)]


@dataclass(frozen=True)
class Catalog:
    families: Dict[int, FamilyTemplate]
    checksum: str
    path: Optional[Path] = None

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "Catalog":
        path = path or CatalogConfig().path
        data = Path(path).read_bytes()
        families = parse_catalog(data.decode("utf-8"))
        checksum = hashlib.sha256(data).hexdigest()
        logger.debug("loaded %d prism families from %s", len(families), path)
        return cls(families, checksum, Path(path))

    def template(self, family: int) -> FamilyTemplate:
        if family not in self.families:
            raise InvalidSpecError(f"unknown prism type {family}")
        return self.families[family]

    def make_spec(self, family: int, k: Optional[int] = None, l: Optional[int] = None,
                  m: Optional[int] = None) -> PrismSpec:
        template = self.template(family)
        values = {"k": k, "l": l, "m": m}
        for name, rule in template.rules.items():
            if rule.kind == "fixed" and values[name] is not None and values[name] != rule.values[0]:
                raise InvalidSpecError(f"type {family}: {name} is fixed to {rule.values[0]}")
        return template.spec(values)

    def diagram_for(self, spec: PrismSpec) -> CoxeterDiagram:
        return self.template(spec.family).instantiate(spec)

    def enumerate(self, dimension: int, max_m: int = 30,
                  family: Optional[int] = None) -> List[PrismSpec]:
        specs = []
        for number in sorted(self.families):
            template = self.families[number]
            if template.dimension != dimension or (family is not None and number != family):
                continue
            specs.extend(template.specs(max_m))
        return sorted(specs, key=lambda s: s.key)

    def finite_qa_candidate_set(self, dimension: int = 3) -> List[PrismSpec]:
        """Specs of H^3 that can be quasi-arithmetic; all other H^3 prisms are not.

        Compact families 1-3 keep base triangles from the arithmetic triangle
        list. Noncompact families keep their listed candidates and the specs
        whose labels all have rational cos^2 and whose lateral triangle
        product is rational.
        """
        if dimension != 3:
            return self.enumerate(dimension)
        arithmetic = set(ARITHMETIC_TRIANGLES)
        max_m = max(max(t) for t in ARITHMETIC_TRIANGLES)
        candidates = []
        for spec in self.enumerate(3, max_m):
            template = self.families[spec.family]
            if spec.family in (1, 2, 3):
                if tuple(sorted(spec.params)) in arithmetic:
                    candidates.append(spec)
            elif template.compact:
                candidates.append(spec)
            elif spec.params in template.candidates:
                candidates.append(spec)
            elif self._rational_ground_field_possible(template, spec):
                candidates.append(spec)
        return candidates

    def _rational_ground_field_possible(self, template: FamilyTemplate, spec: PrismSpec) -> bool:
        if not set(template.lateral_labels(spec)) <= RATIONAL_SQUARE_LABELS:
            return False
        if any(v == 2 for v in spec.params):
            return True
        product = cos_pi_over(spec.k) * cos_pi_over(spec.l) * cos_pi_over(spec.m)
        return product.is_rational


def parse_catalog(text: str) -> Dict[int, FamilyTemplate]:
    families: Dict[int, FamilyTemplate] = {}
    block: Optional[dict] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "family":
                block = {"family": int(parts[1]), "title": "", "edges": [], "rules": {},
                         "hyperbolic": (), "symmetric": None, "compact": True,
                         "candidates": []}
            elif block is None:
                raise DiagramError(f"line {lineno}: statement outside a family block")
            elif head == "title":
                block["title"] = line[len("title"):].strip()
            elif head == "nodes":
                block["node_count"], block["dimension"] = int(parts[1]), int(parts[3])
            elif head == "compact":
                block["compact"] = parts[1] == "yes"
            elif head == "param":
                block["rules"][parts[1]] = _parse_rule(parts[1:])
            elif head == "hyperbolic":
                block["hyperbolic"] = tuple(parts[1:4])
            elif head == "candidate":
                block["candidates"].append(tuple(int(p) for p in parts[1:4]))
            elif head == "symmetric":
                block["symmetric"] = (parts[1], parts[2])
            elif head == "end":
                template = _finish(block)
                families[template.family] = template
                block = None
            else:
                block["edges"].append((int(parts[0]), int(parts[1]), parts[2]))
        except (IndexError, ValueError) as exc:
            raise DiagramError(f"line {lineno}: cannot read {line!r}: {exc}")
    if block is not None:
        raise DiagramError("catalog ends inside a family block")
    return families


def _parse_rule(parts: List[str]) -> ParamRule:
    name, kind, args = parts[0], parts[1], parts[2:]
    if kind == "bound":
        return ParamRule(name, kind, low=int(args[0]),
                         high=None if args[1] == "*" else int(args[1]))
    if kind in ("choice", "fixed"):
        return ParamRule(name, kind, values=tuple(int(a) for a in args))
    raise ValueError(f"unknown parameter kind {kind}")


def _finish(block: dict) -> FamilyTemplate:
    if block["node_count"] != block["dimension"] + 2:
        raise DiagramError(f"type {block['family']}: node count must be dimension + 2")
    if sum(1 for _, _, label in block["edges"] if label == "-") != 1:
        raise DiagramError(f"type {block['family']}: exactly one dashed edge expected")
    return FamilyTemplate(
        family=block["family"], title=block["title"], dimension=block["dimension"],
        node_count=block["node_count"], compact=block["compact"],
        edges=tuple(block["edges"]), rules=block["rules"],
        hyperbolic=block["hyperbolic"], symmetric=block["symmetric"],
        candidates=tuple(block["candidates"]))
