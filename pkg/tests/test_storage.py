import csv
import json
import tempfile
import unittest
from pathlib import Path

from coxeter_arith.algebra import RATIONALS, AlgebraicReal
from coxeter_arith.catalog import Catalog
from coxeter_arith.storage import (
    SYSTOLE_HEADERS, ReportCache, RunManifest, cached_classifier, report_row, write_csv,
)
from coxeter_arith.vinberg import ClassificationReport, Verdict


class TestReportCache(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.catalog = Catalog.load()
        cls.spec = cls.catalog.make_spec(5, m=4)

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "cache.jsonl"

    def tearDown(self):
        self.tmp.cleanup()

    def report(self, verdict=Verdict.PROPERLY_QUASI_ARITHMETIC):
        return ClassificationReport(self.spec, verdict, RATIONALS, AlgebraicReal.from_rational(2),
                                    {"V1": True, "V2": True, "V3": False}, entries_degree=4)

    def test_round_trip(self):
        ReportCache(self.path, "abc").put(self.report(), 20)
        cache = ReportCache(self.path, "abc")
        self.assertEqual(len(cache), 1)
        hit = cache.get(self.spec)
        self.assertEqual(hit.verdict, Verdict.PROPERLY_QUASI_ARITHMETIC)
        self.assertEqual(hit.a_squared, 2)
        self.assertEqual(hit.conditions["V3"], False)
        self.assertEqual(hit.entries_degree, 4)

    def test_other_catalog_is_ignored(self):
        ReportCache(self.path, "abc").put(self.report(), 20)
        with self.assertLogs("coxeter_arith.storage", "INFO"):
            cache = ReportCache(self.path, "def")
        self.assertEqual(len(cache), 0)
        self.assertIsNone(cache.get(self.spec))
        self.assertEqual(self.path.read_text(), "")

    def test_compaction_keeps_current_entries(self):
        old, current = ReportCache(self.path, "old"), ReportCache(self.path, "abc")
        old.put(self.report(), 20)
        current.put(self.report(Verdict.ARITHMETIC), 20)
        with self.assertLogs("coxeter_arith.storage", "INFO"):
            cache = ReportCache(self.path, "abc")
        lines = self.path.read_text().splitlines()
        self.assertEqual(len(lines), 1)
        self.assertEqual(json.loads(lines[0])["checksum"], "abc")
        self.assertEqual(cache.get(self.spec).verdict, Verdict.ARITHMETIC)

    def test_unreadable_lines_are_skipped(self):
        ReportCache(self.path, "abc").put(self.report(), 20)
        with open(self.path, "a") as f:
            f.write("{not json\n")
        with self.assertLogs("coxeter_arith.storage", "WARNING"):
            cache = ReportCache(self.path, "abc")
        self.assertEqual(len(cache), 1)
        self.assertNotIn("{not json", self.path.read_text())

    def test_classifier_prefers_the_cache(self):
        cache = ReportCache(self.path, self.catalog.checksum)
        cache.put(self.report(Verdict.NOT_QUASI_ARITHMETIC), 20)
        report = cached_classifier(self.catalog, cache)(self.spec)
        self.assertEqual(report.verdict, Verdict.NOT_QUASI_ARITHMETIC)

    def test_report_row(self):
        row = report_row(self.report(), 10)
        self.assertEqual((row["family"], row["k"], row["l"], row["m"]), (5, 6, 2, 4))
        self.assertEqual(row["verdict"], "PQA")
        self.assertEqual(row["ground_field"], "Q")
        self.assertFalse(row["V3"])


class TestFiles(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_csv_header_comment_and_missing_columns(self):
        path = self.dir / "out" / "limit.csv"
        write_csv(path, SYSTOLE_HEADERS, [{"family": 1, "k": 2, "l": 3, "m": 7, "extra": "x"}],
                  comment="run 0123")
        text = path.read_text()
        self.assertTrue(text.startswith("# run 0123\n"))
        self.assertNotIn(b"\r", path.read_bytes())
        (row,) = csv.DictReader(text.splitlines()[1:])
        self.assertEqual(row["m"], "7")
        self.assertEqual(row["bound_decimal"], "")
        self.assertNotIn("extra", row)

    def test_manifest(self):
        manifest = RunManifest("reproduce", "abc", 30, argv=["reproduce", "--table", "higher"],
                               bounds={"tables": ["higher"], "max_m": 30})
        manifest.add(self.dir / "summary.md")
        manifest.record("higher", 10, [{"kind": "unlisted", "explained": True}])
        path = manifest.write(self.dir)
        data = json.loads(path.read_text())
        self.assertEqual(data["command"], "reproduce")
        self.assertEqual(data["run_id"], manifest.run_id)
        self.assertEqual(len(data["run_id"]), 12)
        self.assertEqual(data["files"], [str(self.dir / "summary.md")])
        self.assertEqual(data["precision"], 30)
        self.assertEqual(data["argv"], ["reproduce", "--table", "higher"])
        self.assertEqual(data["row_counts"], {"higher": 10})
        self.assertEqual(data["discrepancies"]["higher"][0]["kind"], "unlisted")
        self.assertIn("started", data)

    def test_run_id_depends_on_inputs_only(self):
        first = RunManifest("reproduce", "abc", 30, bounds={"max_m": 30})
        second = RunManifest("reproduce", "abc", 30, bounds={"max_m": 30}, started="later")
        self.assertEqual(first.run_id, second.run_id)
        self.assertNotEqual(first.run_id, RunManifest("reproduce", "abc", 40).run_id)
        self.assertNotEqual(first.run_id, RunManifest("reproduce", "def", 30,
                                                      bounds={"max_m": 30}).run_id)


if __name__ == "__main__":
    unittest.main()
