"""Reproduce the classified tables and diff them against the bundled expected rows."""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import (
    RATIONALS, AlgebraicReal, NumberField, algebraic_from_expr, decimal,
    field_with_embeddings, fields_equal,
)
from .catalog import Catalog, PrismSpec
from .config import CatalogConfig
from .errors import InvalidSpecError
from .geometry import CLOSED_FORMS, closed_form_value
from .vinberg import ClassificationReport, classify, solve_spec

logger = logging.getLogger(__name__)

ClassifyFn = Callable[[PrismSpec], ClassificationReport]


@dataclass(frozen=True)
class TableSpec:
    id: str
    title: str
    dimension: Optional[int]
    families: Tuple[int, ...]
    verdicts: Tuple[str, ...]


@dataclass(frozen=True)
class ExpectedRow:
    table: str
    family: int
    params: Dict[str, int]
    verdict: str
    a_squared: str
    field: Tuple[str, ...]
    printed_a_squared: Optional[str] = None
    printed_field: Optional[Tuple[str, ...]] = None
    listed: bool = True
    note: str = ""

    def spec(self, catalog: Catalog) -> PrismSpec:
        return catalog.make_spec(self.family, **self.params)

    def value(self, printed: bool = False) -> AlgebraicReal:
        return algebraic_from_expr(self.printed_a_squared if printed else self.a_squared)

    def number_field(self, printed: bool = False) -> NumberField:
        gens = self.printed_field if printed else self.field
        if not gens:
            return RATIONALS
        return field_with_embeddings([algebraic_from_expr(g) for g in gens])


@dataclass(frozen=True)
class RowDiff:
    table: str
    kind: str                # missing, unexpected, verdict, a_squared, field, closed_form, printed_*
    label: str
    expected: str = ""
    computed: str = ""
    explained: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {"table": self.table, "kind": self.kind, "row": self.label,
                "expected": self.expected, "computed": self.computed,
                "explained": self.explained, "note": self.note}


@dataclass
class TableResult:
    spec: TableSpec
    rows: List[dict] = field(default_factory=list)
    diffs: List[RowDiff] = field(default_factory=list)
    reports: List[ClassificationReport] = field(default_factory=list)

    @property
    def unexplained(self) -> List[RowDiff]:
        return [d for d in self.diffs if not d.explained]


@dataclass(frozen=True)
class TotalsCheck:
    scope: str
    verdict: str
    computed: int
    reference: int
    note: str = ""

    @property
    def matches(self) -> bool:
        return self.computed == self.reference

    def to_dict(self) -> dict:
        return {"scope": self.scope, "verdict": self.verdict, "computed": self.computed,
                "reference": self.reference, "matches": self.matches, "note": self.note}


@dataclass
class Reproduction:
    tables: List[TableResult]
    totals: List[TotalsCheck] = field(default_factory=list)

    @property
    def diffs(self) -> List[RowDiff]:
        return [d for t in self.tables for d in t.diffs]

    @property
    def discrepancies(self) -> List[RowDiff]:
        return [d for d in self.diffs if not d.explained]

    @property
    def ok(self) -> bool:
        return not self.discrepancies and all(t.matches or t.note for t in self.totals)


@dataclass(frozen=True)
class ExpectedTables:
    tables: Dict[str, TableSpec]
    rows: Tuple[ExpectedRow, ...]
    reference_totals: Dict[str, Dict[str, int]]
    totals_notes: Dict[str, str]

    def rows_for(self, table: str) -> List[ExpectedRow]:
        return [r for r in self.rows if r.table == table]


def load_expected(path: Optional[Path] = None) -> ExpectedTables:
    path = Path(path or CatalogConfig().expected_rows)
    return _load_expected(str(path))


@lru_cache(maxsize=4)
def _load_expected(path: str) -> ExpectedTables:
    with open(path) as f:
        raw = json.load(f)
    tables = {
        t["id"]: TableSpec(t["id"], t["title"], t.get("dimension"),
                           tuple(t["families"]), tuple(t["verdicts"]))
        for t in raw["tables"]
    }
    rows = tuple(
        ExpectedRow(
            table=r["table"], family=r["family"], params=dict(r["params"]),
            verdict=r["verdict"], a_squared=r["a_squared"], field=tuple(r["field"]),
            printed_a_squared=r.get("printed_a_squared"),
            printed_field=tuple(r["printed_field"]) if "printed_field" in r else None,
            listed=r.get("listed", True), note=r.get("note", ""),
        )
        for r in raw["rows"]
    )
    return ExpectedTables(tables, rows, raw["reference_totals"], raw.get("totals_notes", {}))


def table_row(report: ClassificationReport, digits: int = 50) -> dict:
    spec = report.spec
    return {
        "family": spec.family, "k": spec.k, "l": spec.l, "m": spec.m,
        "dimension": spec.dimension,
        "a_squared": str(report.a_squared),
        "a_squared_decimal": decimal(report.a_squared, digits),
        "ground_field": report.ground_field.describe(),
        "verdict": report.verdict.value,
    }


def table_specs(table: TableSpec, catalog: Catalog) -> List[PrismSpec]:
    """Specs whose verdict decides the table: the finite candidate set in H^3, everything above."""
    if table.dimension == 3:
        pool = catalog.finite_qa_candidate_set(3)
    else:
        pool = catalog.enumerate(4) + catalog.enumerate(5)
    return [s for s in pool if s.family in table.families]


def reproduce_table(table: TableSpec, expected: ExpectedTables, catalog: Catalog,
                    classify_fn: Optional[ClassifyFn] = None, digits: int = 50,
                    max_m: int = 30) -> TableResult:
    if table.id == "closed-forms":
        return reproduce_closed_forms(table, catalog, max_m, digits)
    classify_fn = classify_fn or (lambda spec: classify(spec, catalog))
    result = TableResult(table)
    reports = {spec.key: classify_fn(spec) for spec in table_specs(table, catalog)}
    wanted = set(table.verdicts)
    expected_keys = set()

    for row in expected.rows_for(table.id):
        spec = row.spec(catalog)
        expected_keys.add(spec.key)
        report = reports.get(spec.key)
        if report is None:
            result.diffs.append(RowDiff(table.id, "missing", spec.label, row.a_squared,
                                        note="not in the candidate set"))
            continue
        result.diffs.extend(_compare_row(table.id, row, report))

    for key in sorted(reports):
        report = reports[key]
        if report.verdict.value not in wanted:
            continue
        result.reports.append(report)
        result.rows.append(table_row(report, digits))
        if key not in expected_keys:
            result.diffs.append(RowDiff(table.id, "unexpected", report.spec.label,
                                        computed=f"{report.verdict.value} {report.a_squared}"))
    logger.info("table %s: %d rows, %d differences (%d unexplained)", table.id,
                len(result.rows), len(result.diffs), len(result.unexplained))
    return result


def _compare_row(table: str, row: ExpectedRow, report: ClassificationReport) -> List[RowDiff]:
    label = report.spec.label
    diffs = []
    if report.verdict.value != row.verdict:
        diffs.append(RowDiff(table, "verdict", label, row.verdict, report.verdict.value))
        return diffs
    if report.a_squared != row.value():
        diffs.append(RowDiff(table, "a_squared", label, row.a_squared, str(report.a_squared)))
    if not fields_equal(report.ground_field, row.number_field()):
        diffs.append(RowDiff(table, "field", label, ", ".join(row.field) or "Q",
                             report.ground_field.describe()))
    if row.printed_a_squared and report.a_squared != row.value(printed=True):
        diffs.append(RowDiff(table, "printed_a_squared", label, row.printed_a_squared,
                             str(report.a_squared), explained=True, note=row.note))
    if row.printed_field and not fields_equal(report.ground_field, row.number_field(printed=True)):
        diffs.append(RowDiff(table, "printed_field", label, ", ".join(row.printed_field),
                             report.ground_field.describe(), explained=True, note=row.note))
    if not row.listed:
        diffs.append(RowDiff(table, "unlisted", label, computed=report.verdict.value,
                             explained=True, note=row.note))
    return diffs


def reproduce_closed_forms(table: TableSpec, catalog: Catalog, max_m: int = 30,
                           digits: int = 50) -> TableResult:
    """Solve every legal (k, l, m) of types 1-3 up to max_m and compare with the closed forms."""
    result = TableResult(table)
    for (family, k, l), form in sorted(CLOSED_FORMS.items()):
        template = catalog.template(family)
        printed_checked = form.corrected is None
        for m in range(2, max_m + 1):
            try:
                spec = template.spec({"k": k, "l": l, "m": m})
            except InvalidSpecError:
                continue
            solved = solve_spec(spec, catalog).a_squared
            value = closed_form_value(family, k, l, m)
            result.rows.append({
                "family": family, "k": k, "l": l, "m": m,
                "a_squared": str(solved), "a_squared_decimal": decimal(solved, digits),
                "closed_form": form.formula, "matches": solved == value,
            })
            if solved != value:
                result.diffs.append(RowDiff(table.id, "closed_form", spec.label, form.formula,
                                            str(solved)))
            if not printed_checked:
                printed_checked = True
                if solved != closed_form_value(family, k, l, m, printed=True):
                    result.diffs.append(RowDiff(
                        table.id, "printed_closed_form", f"type {family} ({k},{l},m)",
                        form.printed, form.corrected, explained=True,
                        note=f"printed form disagrees at m = {m}"))
    return result


def count_totals(reports: Sequence[ClassificationReport]) -> Dict[str, Counter]:
    counts: Dict[str, Counter] = {"overall": Counter()}
    seen = set()
    for report in reports:
        if report.spec.key in seen or not report.verdict.is_quasi_arithmetic:
            continue
        seen.add(report.spec.key)
        counts.setdefault(str(report.spec.dimension), Counter())[report.verdict.value] += 1
        counts["overall"][report.verdict.value] += 1
    return counts


def check_totals(reports: Sequence[ClassificationReport],
                 expected: ExpectedTables) -> List[TotalsCheck]:
    counts = count_totals(reports)
    checks = []
    for scope, reference in expected.reference_totals.items():
        for verdict, number in reference.items():
            computed = counts.get(scope, Counter())[verdict]
            note = expected.totals_notes.get(scope, "") if computed != number else ""
            checks.append(TotalsCheck(scope, verdict, computed, number, note))
    return checks


def reproduce(table_ids: Optional[Sequence[str]] = None, catalog: Optional[Catalog] = None,
              classify_fn: Optional[ClassifyFn] = None, expected: Optional[ExpectedTables] = None,
              digits: int = 50, max_m: int = 30) -> Reproduction:
    """Reproduce the requested tables (all by default) and, when every classified table ran, the totals."""
    catalog = catalog or Catalog.load()
    expected = expected or load_expected()
    ids = list(table_ids) if table_ids else list(expected.tables)
    unknown = [i for i in ids if i not in expected.tables]
    if unknown:
        raise InvalidSpecError(f"unknown table(s): {', '.join(unknown)}")
    results = [reproduce_table(expected.tables[i], expected, catalog, classify_fn, digits, max_m)
               for i in ids]
    reproduction = Reproduction(results)
    classified = {t.id for t in expected.tables.values() if t.verdicts}
    if classified <= set(ids):
        reports = [r for t in results for r in t.reports]
        reproduction.totals = check_totals(reports, expected)
    return reproduction
