"""Coxeter diagrams, Gram matrices, the base-distance solve and the cyclic-product fields."""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import networkx as nx

from .algebra import (
    RATIONALS, AlgebraicReal, FieldElement, NumberField, cos_pi_over,
    field_with_embeddings,
)
from .errors import DiagramError, InternalCheckError, SolveError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dashed:
    """Edge between divergent facets; ``value`` is cosh of their distance when known."""

    value: Optional[AlgebraicReal] = None

    def __str__(self) -> str:
        return "-"


Label = Union[int, Dashed]
Signature = Tuple[int, int, int]


# ------------------------------------------------------------------- Diagrams ---

@dataclass(frozen=True)
class CoxeterDiagram:
    node_count: int
    edges: Tuple[Tuple[int, int, Label], ...]
    dimension: Optional[int] = None

    def __post_init__(self):
        seen = set()
        dashed = 0
        for i, j, label in self.edges:
            if not 0 <= i < j < self.node_count:
                raise DiagramError(f"bad edge ({i}, {j}) for {self.node_count} nodes")
            if (i, j) in seen:
                raise DiagramError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            if isinstance(label, Dashed):
                dashed += 1
                if label.value is not None and label.value < 1:
                    raise DiagramError("dashed weight must be at least 1")
            elif not isinstance(label, int) or label < 3:
                raise DiagramError(f"edge label must be an integer >= 3, got {label!r}")
        if dashed > 1:
            raise DiagramError("at most one dashed edge is supported")

    @classmethod
    def build(cls, node_count: int, edges: Iterable[Tuple[int, int, Label]],
              dimension: Optional[int] = None) -> "CoxeterDiagram":
        """Normalize edge orientation, drop label-2 edges and sort."""
        normalized = []
        for i, j, label in edges:
            if label == 2:
                continue
            if i > j:
                i, j = j, i
            normalized.append((i, j, label))
        normalized.sort(key=lambda e: (e[0], e[1]))
        return cls(node_count, tuple(normalized), dimension)

    def label(self, i: int, j: int) -> Label:
        i, j = min(i, j), max(i, j)
        for a, b, label in self.edges:
            if (a, b) == (i, j):
                return label
        return 2

    @property
    def dashed_pair(self) -> Optional[Tuple[int, int]]:
        return next(((i, j) for i, j, label in self.edges if isinstance(label, Dashed)), None)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.node_count))
        for i, j, label in self.edges:
            g.add_edge(i, j, weight=label)
        return g

    def relabel(self, permutation: Sequence[int]) -> "CoxeterDiagram":
        """Diagram with node i renamed permutation[i]."""
        return CoxeterDiagram.build(
            self.node_count,
            [(permutation[i], permutation[j], label) for i, j, label in self.edges],
            self.dimension)

    @classmethod
    def parse(cls, text: str) -> "CoxeterDiagram":
        """Read the edge-list format: ``nodes N dim d`` then ``i j m`` or ``i j -`` lines."""
        node_count, dimension, edges = None, None, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "nodes":
                try:
                    node_count = int(parts[1])
                    if len(parts) >= 4 and parts[2] == "dim":
                        dimension = int(parts[3])
                except (IndexError, ValueError):
                    raise DiagramError(f"line {lineno}: bad header {line!r}")
                continue
            if len(parts) != 3:
                raise DiagramError(f"line {lineno}: expected 'i j label', got {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                label = Dashed() if parts[2] == "-" else int(parts[2])
            except ValueError:
                raise DiagramError(f"line {lineno}: bad edge {line!r}")
            edges.append((i, j, label))
        if node_count is None:
            raise DiagramError("missing 'nodes N' header")
        return cls.build(node_count, edges, dimension)

    def dumps(self) -> str:
        header = f"nodes {self.node_count}"
        if self.dimension is not None:
            header += f" dim {self.dimension}"
        lines = [header] + [f"{i} {j} {label}" for i, j, label in self.edges]
        return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- Matrices ---

@dataclass(frozen=True)
class GramMatrix:
    """A symmetric matrix with entries in a real number field."""

    field: NumberField
    entries: Tuple[Tuple[FieldElement, ...], ...]
    dimension: Optional[int] = None

    @classmethod
    def from_rationals(cls, rows: Sequence[Sequence], dimension: Optional[int] = None) -> "GramMatrix":
        return cls(RATIONALS, tuple(tuple(RATIONALS.rational(Fraction(v)) for v in row)
                                    for row in rows), dimension)

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> FieldElement:
        return self.entries[i][j]

    def rows(self) -> List[List[FieldElement]]:
        return [list(row) for row in self.entries]

    def permuted(self, permutation: Sequence[int]) -> "GramMatrix":
        """The matrix P G P^T with node i moved to permutation[i]."""
        n = self.size
        inverse = [0] * n
        for i, p in enumerate(permutation):
            inverse[p] = i
        return GramMatrix(self.field, tuple(tuple(self.entries[inverse[a]][inverse[b]]
                                                  for b in range(n)) for a in range(n)),
                          self.dimension)

    def support_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.size))
        for i, j in combinations(range(self.size), 2):
            if not self.entries[i][j].is_zero:
                g.add_edge(i, j, weight=self.entries[i][j])
        return g

    def embedded(self, index: int, digits: int = 100) -> "mpmath.matrix":
        """The conjugate matrix under a real embedding, as mpmath numbers."""
        probe = self.field.probe(index)
        with mpmath.workdps(digits):
            return mpmath.matrix([[probe.value(e).to_mpf(digits) for e in row]
                                  for row in self.entries])


@dataclass(frozen=True)
class GramTemplate:
    """Gram matrix with at most one unknown symmetric pair, carrying -t."""

    field: NumberField
    entries: Tuple[Tuple[Optional[FieldElement], ...], ...]
    dimension: Optional[int]
    unknown: Optional[Tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.entries)

    def rows_at(self, t: FieldElement) -> List[List[FieldElement]]:
        return [[-t if e is None else e for e in row] for row in self.entries]

    def expected_signature(self) -> Signature:
        d = self.size - 2 if self.dimension is None else self.dimension
        return d, 1, 1

    def leaf_of_unknown(self) -> Optional[Tuple[int, int]]:
        """(leaf, neighbour) when one end of the unknown pair touches nothing else."""
        if self.unknown is None:
            return None
        for leaf, other in (self.unknown, self.unknown[::-1]):
            if all(e is None or e.is_zero or k == leaf
                   for k, e in enumerate(self.entries[leaf]) if k != other):
                return leaf, other
        return None


def build_template(diagram: CoxeterDiagram, dimension: Optional[int] = None) -> GramTemplate:
    """Gram template of a diagram: 1 on the diagonal, -cos(pi/m), 0 or -t off it."""
    labels = sorted({label for _, _, label in diagram.edges if isinstance(label, int)})
    dashed_values = [label.value for _, _, label in diagram.edges
                     if isinstance(label, Dashed) and label.value is not None]
    cosines = {m: cos_pi_over(m) for m in labels}
    values = sorted(cosines.values(), key=lambda v: -v.degree) + dashed_values
    field = field_with_embeddings(values)
    images = {}
    for (value, rep) in field.generators:
        images.setdefault(value, field.element(rep))

    n = diagram.node_count
    rows: List[List[Optional[FieldElement]]] = [
        [field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    unknown = None
    for i, j, label in diagram.edges:
        if isinstance(label, Dashed):
            if label.value is None:
                entry, unknown = None, (i, j)
            else:
                entry = -images[label.value]
        else:
            entry = -images[cosines[label]]
        rows[i][j] = rows[j][i] = entry
    logger.debug("template over a field of degree %d", field.degree)
    return GramTemplate(field, tuple(tuple(r) for r in rows),
                        diagram.dimension if dimension is None else dimension, unknown)


def gram_from_diagram(diagram: CoxeterDiagram, dimension: int) -> GramTemplate:
    """Gram template of a prism diagram in H^dimension."""
    if diagram.node_count != dimension + 2:
        raise DiagramError(f"a prism in H^{dimension} has {dimension + 2} facets, "
                           f"diagram has {diagram.node_count}")
    return build_template(diagram, dimension)


def gram_of_diagram(diagram: CoxeterDiagram) -> GramMatrix:
    """Numeric Gram matrix of a diagram without unknowns."""
    template = build_template(diagram)
    if template.unknown is not None:
        raise DiagramError("diagram has an unknown dashed weight")
    return GramMatrix(template.field, template.entries, template.dimension)


# ----------------------------------------------------------------- Determinant ---

def determinant(rows: Sequence[Sequence[FieldElement]], one: FieldElement) -> FieldElement:
    """Fraction-free Bareiss elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return one
    sign, previous = 1, one
    for k in range(n - 1):
        if m[k][k].is_zero:
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if swap is None:
                return one * 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous
        previous = m[k][k]
    return m[n - 1][n - 1] * sign


@dataclass(frozen=True)
class QuadraticInT:
    """det G(t) = c2 t^2 + c1 t + c0 over the template field."""

    c0: FieldElement
    c1: FieldElement
    c2: FieldElement

    def __call__(self, t) -> FieldElement:
        return self.c2 * t * t + self.c1 * t + self.c0

    def coefficients(self) -> Tuple[AlgebraicReal, AlgebraicReal, AlgebraicReal]:
        f = self.c0.field
        return f.to_real(self.c0), f.to_real(self.c1), f.to_real(self.c2)


def det_in_t(template: GramTemplate) -> QuadraticInT:
    """Exact determinant as a polynomial in the unknown, by interpolation at t = 0, 1, -1."""
    if template.unknown is None:
        raise DiagramError("template has no dashed entry")
    f = template.field
    d0, d1, dm = (determinant(template.rows_at(f.rational(t)), f.one) for t in (0, 1, -1))
    half = Fraction(1, 2)
    return QuadraticInT(d0, (d1 - dm) * half, (d1 + dm) * half - d0)


# ------------------------------------------------------------------ Signature ---

def _matmul(a: List[List[FieldElement]], b: List[List[FieldElement]]) -> List[List[FieldElement]]:
    n = len(a)
    zero = a[0][0] * 0
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                if not a[i][k].is_zero and not b[k][j].is_zero:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def characteristic_coefficients(gram: GramMatrix) -> List[FieldElement]:
    """Coefficients of det(lambda I - G), highest first, by Faddeev-LeVerrier."""
    a = gram.rows()
    n = gram.size
    one, zero = gram.field.one, gram.field.zero
    coeffs = [one]
    current = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        current = _matmul(a, current)
        for i in range(n):
            current[i][i] = current[i][i] + coeffs[-1]
        product = _matmul(a, current)
        trace = zero
        for i in range(n):
            trace = trace + product[i][i]
        coeffs.append(trace * Fraction(-1, k))
    return coeffs


def signature_from_signs(signs: Sequence[int]) -> Signature:
    """Inertia of a real symmetric matrix from the signs of its characteristic coefficients."""
    n = len(signs) - 1
    zeros = 0
    while zeros < n and signs[n - zeros] == 0:
        zeros += 1
    nonzero = [s for s in signs[:n + 1 - zeros] if s != 0]
    positive = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    return positive, n - zeros - positive, zeros


def signature(gram: GramMatrix, index: Optional[int] = None) -> Signature:
    """Exact (n_pos, n_neg, n_zero) at a real embedding (the identity by default)."""
    probe = gram.field.probe(index)
    return signature_from_signs([probe.sign(c) for c in characteristic_coefficients(gram)])


def principal_minors(gram: GramMatrix) -> Dict[Tuple[int, ...], FieldElement]:
    """All nonempty principal minors, by memoized Laplace expansion along the first row."""
    memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], FieldElement] = {}
    one = gram.field.one

    def minor(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> FieldElement:
        if not rows:
            return one
        key = (rows, cols)
        if key not in memo:
            total = one * 0
            r = rows[0]
            for idx, c in enumerate(cols):
                entry = gram.entries[r][c]
                if entry.is_zero:
                    continue
                term = entry * minor(rows[1:], cols[:idx] + cols[idx + 1:])
                total = total + term if idx % 2 == 0 else total - term
            memo[key] = total
        return memo[key]

    nodes = range(gram.size)
    return {subset: minor(subset, subset)
            for size in range(1, gram.size + 1) for subset in combinations(nodes, size)}


# ---------------------------------------------------------- Base distance solve ---

@dataclass(frozen=True)
class _Root:
    a: AlgebraicReal
    shift: FieldElement
    scale: FieldElement
    radicand: Optional[FieldElement]   # t = shift + scale * sqrt(radicand)


@dataclass(frozen=True)
class BaseDistance:
    """The solved unknown t = a = cosh(d) of a template."""

    template: GramTemplate
    quadratic: QuadraticInT
    a: AlgebraicReal
    signature: Signature
    root: _Root = dc_field(repr=False)

    @property
    def a_squared(self) -> AlgebraicReal:
        element = self.a_squared_element
        if element is not None:
            return self.template.field.to_real(element)
        return self.a * self.a

    @property
    def a_squared_element(self) -> Optional[FieldElement]:
        """a^2 in the template field when it lies there."""
        return _square_in_field(self.root)

    def gram(self) -> GramMatrix:
        """The numeric Gram matrix over Q(entries) with t = a substituted."""
        return _numeric_gram(self.template, self.root)


def _square_in_field(root: _Root) -> Optional[FieldElement]:
    if root.radicand is None:
        return root.shift * root.shift
    if root.shift.is_zero:
        return root.scale * root.scale * root.radicand
    return None


def _numeric_gram(template: GramTemplate, root: _Root) -> GramMatrix:
    base = template.field
    if root.radicand is None:
        field, lift, t = base, (lambda e: e), root.shift
    else:
        ext = base.adjoin_sqrt(root.radicand)
        field, lift = ext.field, ext.lift
        t = lift(root.shift) + lift(root.scale) * ext.value
    entries = tuple(tuple(-t if e is None else lift(e) for e in row) for row in template.entries)
    return GramMatrix(field, entries, template.dimension)


def _candidate_roots(quad: QuadraticInT) -> List[_Root]:
    f = quad.c0.field
    if quad.c2.is_zero:
        if quad.c1.is_zero:
            raise SolveError("determinant does not depend on the dashed weight")
        t = -quad.c0 / quad.c1
        return [_Root(f.to_real(t), t, f.zero, None)]
    if quad.c1.is_zero:
        q = -quad.c0 / quad.c2
        if f.sign_at(q, f.identity) <= 0:
            return []
        return [_Root(f.to_real(q).sqrt(), f.zero, f.one, q)]
    disc = quad.c1 * quad.c1 - quad.c0 * quad.c2 * 4
    if f.sign_at(disc, f.identity) < 0:
        return []
    shift = -quad.c1 / (quad.c2 * 2)
    roots = []
    for s in (1, -1):
        scale = f.one * s / (quad.c2 * 2)
        a = f.to_real(shift) + f.to_real(scale) * f.to_real(disc).sqrt()
        roots.append(_Root(a, shift, scale, disc))
    return roots


def _root_signature(template: GramTemplate, root: _Root) -> Signature:
    leaf = template.leaf_of_unknown()
    a_squared = _square_in_field(root)
    if leaf is not None and a_squared is not None:
        # Schur complement of the leaf's diagonal 1: the neighbour's diagonal becomes 1 - a^2
        b, p = leaf
        keep = [i for i in range(template.size) if i != b]
        rows = []
        for i in keep:
            row = []
            for j in keep:
                e = template.entries[i][j]
                row.append(template.field.one - a_squared if i == j == p else e)
            rows.append(tuple(row))
        pos, neg, zero = signature(GramMatrix(template.field, tuple(rows)))
        return pos + 1, neg, zero
    return signature(_numeric_gram(template, root))


def solve_base_distance(template: GramTemplate) -> BaseDistance:
    """The root a > 1 of det G(t) = 0 whose Gram matrix has signature (d, 1, 1)."""
    quad = det_in_t(template)
    expected = template.expected_signature()
    admissible = []
    for root in _candidate_roots(quad):
        if root.a <= 1:
            continue
        sig = _root_signature(template, root)
        if sig == expected:
            admissible.append((root, sig))
        else:
            logger.debug("root %s rejected with signature %s", root.a, sig)
    if not admissible:
        raise SolveError("no root > 1 gives a Gram matrix of signature "
                         f"{expected}; the diagram does not bound a finite-volume prism")
    if len(admissible) > 1:
        raise SolveError("both roots of the base-distance quadratic are admissible")
    root, sig = admissible[0]
    return BaseDistance(template, quad, root.a, sig, root)


# ------------------------------------------------------------- Cyclic products ---

@dataclass(frozen=True)
class CyclicProduct:
    cycle: Tuple[int, ...]
    value: FieldElement


def canonical_cycle(nodes: Sequence[int]) -> Tuple[int, ...]:
    """Rotate to the smallest node and pick the direction with the smaller second node."""
    nodes = list(nodes)
    start = nodes.index(min(nodes))
    forward = nodes[start:] + nodes[:start]
    backward = [forward[0]] + forward[1:][::-1]
    return tuple(min(forward, backward))


def simple_cycles(graph: nx.Graph) -> List[Tuple[int, ...]]:
    cycles = {canonical_cycle(c) for c in nx.simple_cycles(graph) if len(c) >= 3}
    return sorted(cycles, key=lambda c: (len(c), c))


def _products(entry, size: int, graph: nx.Graph, scale: int) -> List[CyclicProduct]:
    products = [CyclicProduct((i,), entry(i, i) * scale) for i in range(size)]
    for i, j in sorted(tuple(sorted(e)) for e in graph.edges()):
        g = entry(i, j) * scale
        products.append(CyclicProduct((i, j), g * g))
    for cycle in simple_cycles(graph):
        value = entry(cycle[-1], cycle[0]) * scale
        for a, b in zip(cycle, cycle[1:]):
            value = value * entry(a, b) * scale
        products.append(CyclicProduct(cycle, value))
    return products


def cyclic_products(gram: GramMatrix, scale: int = 1) -> List[CyclicProduct]:
    """Generators of Cyc(scale * G): diagonal entries, edge squares, simple-cycle products."""
    return _products(gram.entry, gram.size, gram.support_graph(), scale)


def known_products(template: GramTemplate) -> List[CyclicProduct]:
    """Cyclic products of the known entries, skipping every cycle through the unknown pair."""
    graph = nx.Graph()
    graph.add_nodes_from(range(template.size))
    for i, j in combinations(range(template.size), 2):
        e = template.entries[i][j]
        if e is not None and not e.is_zero:
            graph.add_edge(i, j)

    def entry(i, j):
        return template.entries[i][j]

    return _products(entry, template.size, graph, 1)


def template_products(solution: BaseDistance) -> List[CyclicProduct]:
    """Cyclic products of a solved template, written in the template field.

    Needs the unknown pair to have a leaf end (so no simple cycle runs through
    it) and a^2 to lie in the template field.
    """
    template = solution.template
    a_squared = solution.a_squared_element
    if template.leaf_of_unknown() is None or a_squared is None:
        raise SolveError("cyclic products need the full Gram matrix for this template")
    products = known_products(template)
    products.append(CyclicProduct(template.unknown, a_squared))
    return products


@dataclass(frozen=True)
class FieldPair:
    """K(P), generated by the entries, and k(P), generated by the cyclic products."""

    K: NumberField
    k: NumberField
    k_primitive: FieldElement          # primitive element of k written in K
    products: Tuple[CyclicProduct, ...]

    def k_generators(self) -> List[FieldElement]:
        seen: List[FieldElement] = []
        for p in self.products:
            if not p.value.is_rational and all(p.value != s for s in seen):
                seen.append(p.value)
        return seen


def field_pair(gram: GramMatrix) -> FieldPair:
    """K is the field the matrix lives over, which every construction here keeps equal to Q(entries)."""
    products = cyclic_products(gram)
    sub = gram.field.subfield(p.value for p in products)
    _check_containment(gram.field, sub.field, sub.primitive)
    return FieldPair(gram.field, sub.field, sub.primitive, tuple(products))


def ground_field(solution: BaseDistance) -> NumberField:
    """k(P) computed inside the template field, without adjoining a."""
    return solution.template.field.subfield(p.value for p in template_products(solution)).field


def _check_containment(big: NumberField, small: NumberField, primitive: FieldElement) -> None:
    if big.degree % small.degree or big.minpoly(primitive) != small.min_poly:
        raise InternalCheckError("cyclic-product field is not contained in the entries field")
