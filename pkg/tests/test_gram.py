import os
import unittest
from fractions import Fraction

import mpmath

from coxeter_arith.algebra import RATIONALS, sqrt_of
from coxeter_arith.catalog import Catalog
from coxeter_arith.errors import DiagramError, SolveError
from coxeter_arith.gram import (
    CoxeterDiagram, Dashed, GramMatrix, build_template, canonical_cycle, cyclic_products,
    det_in_t, determinant, gram_from_diagram, gram_of_diagram, ground_field, principal_minors, signature,
    signature_from_signs, solve_base_distance,
)
from coxeter_arith.vinberg import solve_spec, triangle_diagram

SLOW = os.environ.get("COXARITH_SLOW") == "1"


def type1(k, l, m):
    return CoxeterDiagram.build(5, [(0, 2, k), (1, 2, l), (0, 1, m), (2, 3, 3), (3, 4, Dashed())], 3)


class TestDiagrams(unittest.TestCase):

    def test_parse_drops_right_angles(self):
        text = "# type 1 (2,3,7)\nnodes 5 dim 3\n0 1 7\n0 2 2\n1 2 3\n2 3 3\n3 4 -\n"
        diagram = CoxeterDiagram.parse(text)
        self.assertEqual(diagram.node_count, 5)
        self.assertEqual(diagram.dimension, 3)
        self.assertEqual(diagram.label(2, 0), 2)
        self.assertEqual(diagram.label(1, 0), 7)
        self.assertEqual(diagram.dashed_pair, (3, 4))
        self.assertEqual(diagram.dumps(), "nodes 5 dim 3\n0 1 7\n1 2 3\n2 3 3\n3 4 -\n")

    def test_build_normalizes_orientation(self):
        diagram = CoxeterDiagram.build(3, [(2, 0, 4), (1, 0, 3)])
        self.assertEqual(diagram.edges, ((0, 1, 3), (0, 2, 4)))

    def test_relabel(self):
        diagram = CoxeterDiagram.build(3, [(0, 1, 5)])
        self.assertEqual(diagram.relabel([2, 1, 0]).label(1, 2), 5)

    def test_bad_edges_raise(self):
        with self.assertRaises(DiagramError):
            CoxeterDiagram.build(3, [(0, 3, 3)])
        with self.assertRaises(DiagramError):
            CoxeterDiagram.build(3, [(0, 1, 1)])
        with self.assertRaises(DiagramError):
            CoxeterDiagram.build(4, [(0, 1, Dashed()), (2, 3, Dashed())])
        with self.assertRaises(DiagramError):
            CoxeterDiagram.build(3, [(0, 1, 3), (1, 0, 4)])

    def test_parse_errors(self):
        with self.assertRaises(DiagramError):
            CoxeterDiagram.parse("0 1 3\n")
        with self.assertRaises(DiagramError):
            CoxeterDiagram.parse("nodes 3\n0 1\n")
        with self.assertRaises(DiagramError):
            CoxeterDiagram.parse("nodes 3\n0 1 x\n")

    def test_prism_needs_dimension_plus_two_facets(self):
        with self.assertRaises(DiagramError):
            gram_from_diagram(type1(2, 3, 7), 4)


class TestMatrices(unittest.TestCase):

    def test_determinant(self):
        one = RATIONALS.one
        self.assertEqual(RATIONALS.to_real(determinant(GramMatrix.from_rationals([[2, 1], [1, 2]]).rows(), one)), 3)
        self.assertEqual(RATIONALS.to_real(determinant(GramMatrix.from_rationals([[0, 1], [1, 0]]).rows(), one)), -1)
        self.assertEqual(RATIONALS.to_real(determinant(GramMatrix.from_rationals([[1, 1], [1, 1]]).rows(), one)), 0)

    def test_signature_of_rational_matrices(self):
        self.assertEqual(signature(GramMatrix.from_rationals(
            [[1, Fraction(-1, 2), 0], [Fraction(-1, 2), 1, Fraction(-1, 2)], [0, Fraction(-1, 2), 1]])),
            (3, 0, 0))
        self.assertEqual(signature(GramMatrix.from_rationals([[1, -1, 0], [-1, 1, 0], [0, 0, 1]])), (2, 0, 1))
        self.assertEqual(signature(GramMatrix.from_rationals([[1, -2], [-2, 1]])), (1, 1, 0))

    def test_signature_from_signs(self):
        self.assertEqual(signature_from_signs([1, -1, -1]), (1, 1, 0))
        self.assertEqual(signature_from_signs([1, -1, 1, 0]), (2, 0, 1))

    def test_hyperbolic_triangle(self):
        self.assertEqual(signature(gram_of_diagram(triangle_diagram(2, 3, 7))), (2, 1, 0))

    def test_principal_minors(self):
        minors = principal_minors(GramMatrix.from_rationals([[1, -2], [-2, 1]]))
        values = {subset: RATIONALS.to_real(v) for subset, v in minors.items()}
        self.assertEqual(values, {(0,): 1, (1,): 1, (0, 1): -3})

    def test_permuted(self):
        gram = GramMatrix.from_rationals([[1, 2, 0], [2, 1, 3], [0, 3, 1]])
        moved = gram.permuted([2, 0, 1])
        self.assertEqual(RATIONALS.to_real(moved.entry(0, 1)), 3)
        self.assertEqual(RATIONALS.to_real(moved.entry(2, 0)), 2)


class TestCyclicProducts(unittest.TestCase):

    def test_canonical_cycle(self):
        self.assertEqual(canonical_cycle([2, 0, 1]), (0, 1, 2))
        self.assertEqual(canonical_cycle([3, 1, 2]), (1, 2, 3))
        self.assertEqual(canonical_cycle([0, 3, 2, 1]), (0, 1, 2, 3))

    def test_triangle_products(self):
        h = Fraction(-1, 2)
        gram = GramMatrix.from_rationals([[1, h, h], [h, 1, h], [h, h, 1]])
        products = {p.cycle: RATIONALS.to_real(p.value) for p in cyclic_products(gram)}
        self.assertEqual(len(products), 7)
        self.assertEqual(products[(0, 1)], Fraction(1, 4))
        self.assertEqual(products[(0, 1, 2)], Fraction(-1, 8))
        doubled = {p.cycle: RATIONALS.to_real(p.value) for p in cyclic_products(gram, scale=2)}
        self.assertEqual(doubled[(1,)], 2)
        self.assertEqual(doubled[(0, 1, 2)], -1)


class TestBaseDistance(unittest.TestCase):

    def test_leaf_of_unknown(self):
        template = build_template(type1(2, 3, 7))
        self.assertEqual(template.unknown, (3, 4))
        self.assertEqual(template.leaf_of_unknown(), (4, 3))
        self.assertEqual(template.expected_signature(), (3, 1, 1))

    def test_determinant_is_even_in_t(self):
        quad = det_in_t(build_template(type1(2, 4, 6)))
        c0, c1, c2 = quad.coefficients()
        self.assertEqual(c0, Fraction(-5, 16))
        self.assertEqual(c1, 0)
        self.assertEqual(c2, Fraction(1, 4))

    def test_rational_solution(self):
        solution = solve_base_distance(build_template(type1(2, 4, 6)))
        self.assertEqual(solution.a_squared, Fraction(5, 4))
        self.assertEqual(solution.a, sqrt_of(5) / 2)
        self.assertEqual(solution.signature, (3, 1, 1))

    def test_golden_solution(self):
        solution = solve_base_distance(build_template(type1(2, 3, 10)))
        self.assertEqual(solution.a_squared, (7 + sqrt_of(5)) / 8)
        self.assertGreater(solution.a, 1)
        self.assertEqual(signature(solution.gram()), (3, 1, 1))
        self.assertEqual(ground_field(solution).describe(), "Q(sqrt(5))")

    def test_chain_in_h4(self):
        diagram = CoxeterDiagram.build(6, [(0, 1, 4), (1, 2, 3), (2, 3, 5), (0, 4, 3), (4, 5, Dashed())], 4)
        solution = solve_base_distance(gram_from_diagram(diagram, 4))
        self.assertEqual(solution.a_squared, (3 + sqrt_of(5)) / 4)
        self.assertEqual(solution.signature, (4, 1, 1))

    def test_euclidean_base_does_not_fix_the_weight(self):
        with self.assertRaises(SolveError):
            solve_base_distance(build_template(type1(3, 3, 3)))


class TestNumericOracle(unittest.TestCase):
    """Exact signatures against 100-digit eigenvalues at every real embedding."""

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def numeric_signature(self, gram, index):
        with mpmath.workdps(100):
            values = mpmath.eigsy(gram.embedded(index, 100), eigvals_only=True)
            eps = mpmath.mpf(10) ** -40
            values = [values[i] for i in range(values.rows)]
            return (sum(1 for v in values if v > eps), sum(1 for v in values if v < -eps),
                    sum(1 for v in values if abs(v) <= eps))

    def assert_agrees(self, spec):
        gram = solve_spec(spec, self.catalog).gram()
        for index in range(len(gram.field.embeddings)):
            with self.subTest(spec=spec.label, embedding=index):
                self.assertEqual(signature(gram, index), self.numeric_signature(gram, index))

    def test_identity_embedding_is_hyperbolic(self):
        gram = solve_spec(self.catalog.make_spec(1, 2, 3, 7), self.catalog).gram()
        self.assertEqual(self.numeric_signature(gram, gram.field.identity), (3, 1, 1))

    def test_sample_prisms(self):
        for key in [(1, 2, 3, 7), (1, 2, 4, 6), (2, 3, 3, 4), (5, None, None, 4)]:
            family, k, l, m = key
            self.assert_agrees(self.catalog.make_spec(family, k, l, m))
        self.assert_agrees(self.catalog.make_spec(12))

    @unittest.skipUnless(SLOW, "set COXARITH_SLOW=1 to check every solved prism")
    def test_every_candidate(self):
        specs = (self.catalog.finite_qa_candidate_set(3) + self.catalog.enumerate(4)
                 + self.catalog.enumerate(5))
        for spec in specs:
            self.assert_agrees(spec)


if __name__ == "__main__":
    unittest.main()
