import os
import unittest
from fractions import Fraction

import mpmath

from coxeter_arith.algebra import sqrt_of
from coxeter_arith.catalog import Catalog
from coxeter_arith.errors import GlueError, InvalidSpecError
from coxeter_arith.geometry import (
    closed_form, closed_form_check, closed_form_value, commensurability_separation, cosh_sum,
    family_field_comparison, glue, glued_obstruction_check, systole_limit_report,
    systole_upper_bound, triangle_ground_field,
)
from coxeter_arith.gram import signature
from coxeter_arith.storage import SYSTOLE_HEADERS
from coxeter_arith.vinberg import Verdict, solve_spec

SLOW = os.environ.get("COXARITH_SLOW") == "1"


class TestClosedForms(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_type1_values(self):
        self.assertEqual(closed_form_value(1, 2, 3, 10), (7 + sqrt_of(5)) / 8)
        self.assertEqual(closed_form_value(1, 2, 4, 6), Fraction(5, 4))
        self.assertEqual(closed_form_value(1, 3, 3, 4), (4 + sqrt_of(2)) / 4)

    def test_matches_solved_values(self):
        for family, k, l, m in [(1, 2, 3, 7), (1, 2, 3, 8), (1, 2, 4, 5), (2, 3, 3, 4), (2, 2, 3, 8)]:
            with self.subTest(family=family, k=k, l=l, m=m):
                self.assertTrue(closed_form_check(family, k, l, m, self.catalog))

    def test_corrected_forms(self):
        self.assertTrue(closed_form_check(1, 3, 5, 3, self.catalog))
        self.assertFalse(closed_form_check(1, 3, 5, 3, self.catalog, printed=True))
        self.assertTrue(closed_form_check(1, 4, 5, 2, self.catalog))
        self.assertFalse(closed_form_check(1, 4, 5, 2, self.catalog, printed=True))

    def test_parameter_order_is_free(self):
        self.assertIs(closed_form(1, 3, 2), closed_form(1, 2, 3))

    def test_unknown_form(self):
        with self.assertRaises(InvalidSpecError):
            closed_form(2, 2, 2)


class TestSystoles(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_bound_agrees_with_the_closed_form(self):
        spec = self.catalog.make_spec(1, 2, 3, 7)
        bound = systole_upper_bound(spec, self.catalog, 30)
        (row,) = systole_limit_report(1, 2, 3, 7, self.catalog, 30, m_values=[7])
        with mpmath.workdps(30):
            self.assertLess(abs(bound - row.bound), mpmath.mpf(10) ** -25)
        self.assertAlmostEqual(float(bound), 1.5774, places=3)

    def test_limit_goes_to_zero(self):
        rows = systole_limit_report(1, 2, 3, 10000, self.catalog, 30, exact_up_to=10,
                                    m_values=[6, 7, 100, 10000])
        self.assertEqual([r.m for r in rows], [7, 100, 10000])
        bounds = [r.bound for r in rows]
        self.assertEqual(bounds, sorted(bounds, reverse=True))
        self.assertLess(rows[-1].bound, 0.05)
        self.assertTrue(all(r.cosh2 > 1 for r in rows))
        self.assertIsNotNone(rows[0].exact)
        self.assertIsNone(rows[1].exact)

    def test_limit_is_strictly_decreasing(self):
        for family, k, l in [(1, 2, 3), (2, 3, 3)]:
            with self.subTest(family=family, k=k, l=l):
                rows = systole_limit_report(family, k, l, 100, self.catalog, 50, exact_up_to=0,
                                            m_values=range(7, 101))
                self.assertEqual(len(rows), 94)
                values = [r.cosh2 for r in rows]
                self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_limit_approaches_one(self):
        (row,) = systole_limit_report(1, 2, 3, 10000, self.catalog, 50, exact_up_to=0,
                                      m_values=[10000])
        self.assertGreater(row.cosh2, 1)
        self.assertLess(row.cosh2 - 1, mpmath.mpf(10) ** -3)

    def test_limit_row_columns(self):
        (row,) = systole_limit_report(1, 2, 3, 10, self.catalog, 20, m_values=[10])
        data = row.to_dict(20)
        self.assertEqual(list(data), SYSTOLE_HEADERS)
        self.assertTrue(data["cosh2_d_decimal"].startswith("1.1545084971874"))

    def test_limit_needs_a_closed_form(self):
        with self.assertRaises(InvalidSpecError):
            systole_limit_report(5, 6, 2, 10, self.catalog)


class TestGluing(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def spec(self, family, k, l, m):
        return self.catalog.make_spec(family, k, l, m)

    def test_cosh_sum(self):
        self.assertEqual(cosh_sum(sqrt_of(3), 1), sqrt_of(3))
        self.assertEqual(cosh_sum(sqrt_of(2), sqrt_of(2)), 3)

    def test_tops_carry_the_solved_distances(self):
        glued = glue(self.spec(2, 3, 3, 4), self.spec(3, 3, 3, 4), self.catalog)
        self.assertFalse(glued.flagged)
        a1 = solve_spec(glued.left, self.catalog).a
        a2 = solve_spec(glued.right, self.catalog).a
        self.assertEqual(glued.field.to_real(glued.q1), a1 * a1)
        self.assertEqual(glued.field.to_real(glued.q2), a2 * a2)
        self.assertEqual(glued.top_entry(), cosh_sum(a1, a2))

    def test_glue_is_symmetric(self):
        left, right = self.spec(2, 3, 3, 4), self.spec(3, 3, 3, 4)
        with self.assertLogs("coxeter_arith.geometry", "WARNING"):
            swapped = glue(right, left, self.catalog)
        self.assertTrue(swapped.flagged)
        self.assertEqual(swapped.top_entry(), glue(left, right, self.catalog).top_entry())

    def test_glued_gram_signature(self):
        glued = glue(self.spec(2, 3, 3, 4), self.spec(3, 3, 3, 4), self.catalog)
        self.assertEqual(signature(glued.gram()), (3, 1, 1))

    def test_glue_errors(self):
        with self.assertRaises(GlueError):
            glue(self.spec(1, 2, 3, 7), self.spec(3, 2, 3, 8), self.catalog)
        with self.assertRaises(GlueError):
            glue(self.catalog.make_spec(4, m=5), self.spec(3, 2, 3, 7), self.catalog)


class TestObstruction(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_heptagonal_base(self):
        record = glued_obstruction_check(1, 2, 3, 7, self.catalog)
        self.assertTrue(record.applicable)
        self.assertEqual(record.verdict, Verdict.NOT_QUASI_ARITHMETIC)
        self.assertTrue(record.sqrt5_in_ground_field)
        self.assertFalse(record.sqrt5_in_triangle_field)
        self.assertEqual(record.triangle_field.degree, 3)
        self.assertEqual(record.to_dict()["certificate"]["glue_identities"], "verified")

    def test_square_base(self):
        record = glued_obstruction_check(2, 3, 3, 4, self.catalog)
        self.assertEqual(record.triangle_field.describe(), "Q(sqrt(2))")
        self.assertEqual(record.to_dict()["kF"], "Q(sqrt(2))")

    def test_multiples_of_five_are_skipped(self):
        record = glued_obstruction_check(1, 2, 3, 10, self.catalog)
        self.assertFalse(record.applicable)
        self.assertIsNone(record.verdict)

    def test_only_types_one_and_two(self):
        with self.assertRaises(InvalidSpecError):
            glued_obstruction_check(3, 2, 3, 7, self.catalog)

    def test_triangle_ground_field(self):
        self.assertEqual(triangle_ground_field(2, 3, 7).degree, 3)
        self.assertTrue(triangle_ground_field(2, 3, 10).contains(sqrt_of(5)))

    @unittest.skipUnless(SLOW, "set COXARITH_SLOW=1 for every small glued prism")
    def test_every_small_base(self):
        bases = [(2, 3, m) for m in (7, 8, 9, 11, 12, 13, 14)]
        bases += [(3, 3, m) for m in (4, 7, 8, 9, 11, 12, 13, 14)]
        for j in (1, 2):
            for k, l, m in bases:
                with self.subTest(j=j, k=k, l=l, m=m):
                    record = glued_obstruction_check(j, k, l, m, self.catalog)
                    self.assertEqual(record.verdict, Verdict.NOT_QUASI_ARITHMETIC)
                    self.assertTrue(record.sqrt5_in_ground_field)
                    self.assertFalse(record.sqrt5_in_triangle_field)

    @unittest.skipUnless(SLOW, "set COXARITH_SLOW=1 to compute k(P) of the glued prism")
    def test_full_and_direct(self):
        record = glued_obstruction_check(2, 3, 3, 4, self.catalog, full=True, direct=True)
        self.assertIn("kP", record.certificate)
        self.assertIn("direct", record.certificate)


class TestSeparation(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()

    def test_classes(self):
        specs = [self.catalog.make_spec(1, k, l, m)
                 for k, l, m in [(2, 3, 7), (2, 3, 8), (2, 3, 10), (2, 4, 5)]]
        classes = commensurability_separation(specs, self.catalog)
        self.assertEqual(len(classes), 3)
        statuses = sorted(c.status for c in classes)
        self.assertEqual(statuses, ["separated", "separated", "undetermined"])
        (shared,) = [c for c in classes if c.status == "undetermined"]
        self.assertEqual(shared.field.describe(), "Q(sqrt(5))")

    def test_types_one_and_three_differ(self):
        self.assertFalse(family_field_comparison(1, 2, 3, 7, self.catalog))

    @unittest.skipUnless(SLOW, "set COXARITH_SLOW=1 to separate the prime labels")
    def test_prime_labels_are_pairwise_incommensurable(self):
        primes = (7, 11, 13, 17, 19, 23, 29)
        specs = [self.catalog.make_spec(1, 2, 3, p) for p in primes]
        classes = commensurability_separation(specs, self.catalog)
        self.assertEqual(len(classes), 7)
        self.assertEqual({c.status for c in classes}, {"separated"})


if __name__ == "__main__":
    unittest.main()
