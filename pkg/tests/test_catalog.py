import unittest

from coxeter_arith.catalog import ARITHMETIC_TRIANGLES, Catalog, is_hyperbolic, parse_catalog
from coxeter_arith.errors import DiagramError, InvalidSpecError


class TestCatalogFile(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_all_families_present(self):
        self.assertEqual(sorted(self.catalog.families), list(range(1, 25)))
        self.assertEqual(len(self.catalog.checksum), 64)

    def test_dimensions_and_compactness(self):
        self.assertEqual(self.catalog.template(1).dimension, 3)
        self.assertTrue(self.catalog.template(1).compact)
        self.assertFalse(self.catalog.template(5).compact)
        self.assertEqual(self.catalog.template(12).node_count, 6)
        self.assertFalse(self.catalog.template(17).compact)
        self.assertEqual(self.catalog.template(22).dimension, 5)

    def test_parse_errors(self):
        with self.assertRaises(DiagramError):
            parse_catalog("title stray\n")
        with self.assertRaises(DiagramError):
            parse_catalog("family 1\nnodes 5 dim 3\n0 1 3\n")
        with self.assertRaises(DiagramError):
            parse_catalog("family 1\nnodes 5 dim 3\n0 1 -\n2 3 -\nend\n")
        with self.assertRaises(DiagramError):
            parse_catalog("family 1\nnodes 4 dim 3\n3 4 -\nend\n")


class TestSpecs(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_symmetric_parameters_are_sorted(self):
        spec = self.catalog.make_spec(1, 3, 2, 7)
        self.assertEqual(spec.params, (2, 3, 7))
        self.assertEqual(spec.label, "type 1 (2,3,7)")

    def test_fixed_parameters_are_filled(self):
        spec = self.catalog.make_spec(5, m=4)
        self.assertEqual(spec.params, (6, 2, 4))
        self.assertFalse(spec.compact)

    def test_parameterless_family(self):
        spec = self.catalog.make_spec(12)
        self.assertEqual(spec.params, (None, None, None))
        self.assertEqual(spec.label, "type 12")
        self.assertEqual(spec.key, (12, 0, 0, 0))

    def test_invalid_specs(self):
        cases = [
            dict(family=99),
            dict(family=1, k=6, l=3, m=7),
            dict(family=1, k=2, l=3, m=6),
            dict(family=1, k=2, l=3),
            dict(family=4, k=4, m=5),
            dict(family=12, k=3),
            dict(family=15, k=6),
        ]
        for case in cases:
            with self.subTest(**case), self.assertRaises(InvalidSpecError):
                self.catalog.make_spec(**case)

    def test_diagram_for(self):
        diagram = self.catalog.diagram_for(self.catalog.make_spec(1, 2, 3, 7))
        self.assertEqual(diagram.label(0, 2), 2)
        self.assertEqual(diagram.label(1, 2), 3)
        self.assertEqual(diagram.label(0, 1), 7)
        self.assertEqual(diagram.dashed_pair, (3, 4))


class TestEnumeration(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_fixed_families(self):
        self.assertEqual([s.m for s in self.catalog.enumerate(3, 12, family=4)], [4, 5])
        (spec,) = self.catalog.enumerate(3, 12, family=11)
        self.assertEqual(spec.params, (6, 6, 3))

    def test_higher_dimensions(self):
        self.assertEqual(len(self.catalog.enumerate(4)), 12)
        five = self.catalog.enumerate(5)
        self.assertEqual(len(five), 5)
        self.assertEqual({s.family for s in five}, {21, 22, 23, 24})

    def test_type1_respects_bounds(self):
        specs = self.catalog.enumerate(3, 10, family=1)
        self.assertTrue(all(s.k <= s.l <= 5 and s.m <= 10 for s in specs))
        self.assertTrue(all(is_hyperbolic(*s.params) for s in specs))
        self.assertIn((2, 3, 7), [s.params for s in specs])
        self.assertNotIn((2, 3, 6), [s.params for s in specs])

    def test_candidate_set(self):
        candidates = {s.key for s in self.catalog.finite_qa_candidate_set(3)}
        self.assertIn((1, 2, 3, 7), candidates)
        self.assertIn((1, 2, 3, 30), candidates)
        self.assertNotIn((1, 2, 3, 13), candidates)
        self.assertIn((8, 4, 4, 3), candidates)
        self.assertIn((8, 3, 4, 4), candidates)
        self.assertIn((8, 4, 4, 6), candidates)
        self.assertNotIn((8, 4, 4, 4), candidates)
        self.assertIn((4, 5, 2, 5), candidates)

    def test_arithmetic_triangles_are_hyperbolic(self):
        for triangle in ARITHMETIC_TRIANGLES:
            self.assertTrue(is_hyperbolic(*triangle), triangle)


if __name__ == "__main__":
    unittest.main()
