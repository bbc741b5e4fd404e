import os
import unittest
from fractions import Fraction

from coxeter_arith.algebra import RATIONALS, AlgebraicReal
from coxeter_arith.catalog import Catalog, PrismSpec
from coxeter_arith.errors import InvalidSpecError
from coxeter_arith.tables import (
    ExpectedTables, TotalsCheck, Reproduction, check_totals, count_totals, load_expected,
    reproduce, reproduce_closed_forms, reproduce_table,
)
from coxeter_arith.vinberg import ClassificationReport, Verdict

SLOW = os.environ.get("COXARITH_SLOW") == "1"


def fake_report(spec: PrismSpec, verdict: Verdict) -> ClassificationReport:
    return ClassificationReport(spec, verdict, RATIONALS, AlgebraicReal.from_rational(2), {})


class TestExpectedRows(unittest.TestCase):

    def setUp(self):
        self.expected = load_expected()

    def test_tables_and_rows(self):
        self.assertEqual(len(self.expected.tables), 6)
        self.assertEqual(len(self.expected.rows), 62)
        self.assertEqual(len(self.expected.rows_for("type1-arithmetic")), 19)
        self.assertEqual(len(self.expected.rows_for("type1-quasi")), 14)
        self.assertEqual(len(self.expected.rows_for("higher")), 10)
        self.assertIsNone(self.expected.tables["higher"].dimension)

    def test_printed_errata_are_kept_apart(self):
        (row,) = [r for r in self.expected.rows_for("type1-arithmetic")
                  if r.params == {"k": 3, "l": 3, "m": 4}]
        self.assertGreater(row.value(), 1)
        self.assertLess(row.value(printed=True), 1)

    def test_unlisted_row(self):
        unlisted = [r for r in self.expected.rows if not r.listed]
        self.assertEqual([(r.family, r.params) for r in unlisted], [(9, {"m": 6})])

    def test_row_fields(self):
        (row,) = [r for r in self.expected.rows if r.family == 5 and r.params == {"m": 4}]
        self.assertTrue(row.number_field().is_rational)
        self.assertEqual(row.value(), Fraction(3, 2))


class TestTotals(unittest.TestCase):

    def spec(self, family, m, dimension=3):
        return PrismSpec(family, None, None, m, dimension, True)

    def test_count_totals_skips_duplicates_and_nqa(self):
        reports = [
            fake_report(self.spec(1, 7), Verdict.ARITHMETIC),
            fake_report(self.spec(1, 7), Verdict.ARITHMETIC),
            fake_report(self.spec(1, 8), Verdict.PROPERLY_QUASI_ARITHMETIC),
            fake_report(self.spec(1, 13), Verdict.NOT_QUASI_ARITHMETIC),
            fake_report(self.spec(12, None, 4), Verdict.ARITHMETIC),
        ]
        counts = count_totals(reports)
        self.assertEqual(counts["overall"], {"A": 2, "PQA": 1})
        self.assertEqual(counts["3"], {"A": 1, "PQA": 1})
        self.assertEqual(counts["4"], {"A": 1})

    def test_check_totals_attaches_notes_to_mismatches(self):
        expected = ExpectedTables({}, (), {"3": {"A": 1}, "4": {"A": 2}}, {"4": "known gap"})
        checks = check_totals([fake_report(self.spec(1, 7), Verdict.ARITHMETIC),
                               fake_report(self.spec(12, None, 4), Verdict.ARITHMETIC)], expected)
        by_scope = {c.scope: c for c in checks}
        self.assertTrue(by_scope["3"].matches)
        self.assertFalse(by_scope["4"].matches)
        self.assertEqual(by_scope["4"].note, "known gap")

    def test_reproduction_ok(self):
        self.assertTrue(Reproduction([], [TotalsCheck("4", "A", 3, 6, "explained")]).ok)
        self.assertFalse(Reproduction([], [TotalsCheck("4", "A", 3, 6)]).ok)


class TestReproduce(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()
        cls.expected = load_expected()

    def test_unknown_table(self):
        with self.assertRaises(InvalidSpecError):
            reproduce(["no-such-table"], self.catalog, expected=self.expected)

    def test_wrong_verdicts_are_reported(self):
        table = self.expected.tables["noncompact"]
        result = reproduce_table(table, self.expected, self.catalog,
                                 lambda spec: fake_report(spec, Verdict.NOT_QUASI_ARITHMETIC))
        self.assertEqual(result.rows, [])
        self.assertEqual(len(result.unexplained), 8)
        self.assertEqual({d.kind for d in result.diffs}, {"verdict"})

    def test_noncompact_table(self):
        table = self.expected.tables["noncompact"]
        result = reproduce_table(table, self.expected, self.catalog, digits=20)
        self.assertEqual(len(result.rows), 8)
        self.assertEqual(result.unexplained, [])
        self.assertEqual([d.kind for d in result.diffs], ["unlisted"])
        self.assertTrue(all(row["ground_field"] == "Q" for row in result.rows))

    def test_small_closed_forms(self):
        table = self.expected.tables["closed-forms"]
        result = reproduce_closed_forms(table, self.catalog, max_m=5, digits=20)
        self.assertTrue(result.rows)
        self.assertTrue(all(row["matches"] for row in result.rows))
        self.assertEqual(result.unexplained, [])
        printed = sorted(d.label for d in result.diffs if d.kind == "printed_closed_form")
        self.assertEqual(printed, ["type 1 (3,5,m)", "type 1 (4,5,m)"])

    @unittest.skipUnless(SLOW, "set COXARITH_SLOW=1 to reproduce every table")
    def test_full_reproduction(self):
        reproduction = reproduce(catalog=self.catalog, expected=self.expected)
        self.assertEqual(reproduction.discrepancies, [])
        self.assertTrue(reproduction.ok)
        overall = {c.verdict: c.computed for c in reproduction.totals if c.scope == "overall"}
        self.assertEqual(overall, {"A": 37, "PQA": 25})


if __name__ == "__main__":
    unittest.main()
