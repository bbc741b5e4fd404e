"""Render classification reports and tables as Markdown, CSV or JSON text."""

import csv
import io
import json
from typing import Iterable, List, Optional, Sequence

from .tables import Reproduction, TableResult

FORMATS = ("md", "csv", "json")
DIFF_HEADERS = ["kind", "row", "expected", "computed", "explained", "note"]
TOTALS_HEADERS = ["scope", "verdict", "computed", "reference", "matches", "note"]


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value).replace("|", "\\|")


def render_markdown(rows: Sequence[dict], headers: Sequence[str], title: str = "") -> str:
    lines = [f"## {title}", ""] if title else []
    lines.append("| " + " | ".join(headers) + " |")
    lines.append("|" + "|".join("---" for _ in headers) + "|")
    for row in rows:
        lines.append("| " + " | ".join(_cell(row.get(h)) for h in headers) + " |")
    return "\n".join(lines) + "\n"


def render_csv(rows: Iterable[dict], headers: Sequence[str], comment: str = "") -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    w = csv.DictWriter(buf, fieldnames=list(headers), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, default=str) + "\n"


def render(rows: Sequence[dict], headers: Sequence[str], fmt: str = "md", title: str = "",
           run_id: Optional[str] = None) -> str:
    if fmt == "md":
        text = render_markdown(rows, headers, title)
        return text + (f"\n_run {run_id}_\n" if run_id else "")
    if fmt == "csv":
        return render_csv(rows, headers, f"run {run_id}" if run_id else "")
    if fmt == "json":
        payload = {"title": title, "rows": list(rows)}
        if run_id:
            payload["run_id"] = run_id
        return render_json(payload)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def render_table_result(result: TableResult, headers: Sequence[str], fmt: str = "md",
                        run_id: Optional[str] = None) -> str:
    text = render(result.rows, headers, fmt, result.spec.title, run_id)
    if fmt == "md" and result.diffs:
        text += "\n" + render_markdown([d.to_dict() for d in result.diffs], DIFF_HEADERS,
                                       "Differences")
    return text


def render_summary(reproduction: Reproduction, fmt: str = "md") -> str:
    diffs = [d.to_dict() for d in reproduction.diffs]
    totals = [t.to_dict() for t in reproduction.totals]
    if fmt == "json":
        return render_json({"ok": reproduction.ok, "differences": diffs, "totals": totals})
    if fmt == "csv":
        return render_csv(diffs, ["table"] + DIFF_HEADERS)
    parts: List[str] = []
    if totals:
        parts.append(render_markdown(totals, TOTALS_HEADERS, "Totals"))
    unexplained = [d for d in diffs if not d["explained"]]
    parts.append(f"{len(diffs)} differences, {len(unexplained)} unexplained\n")
    return "\n".join(parts)
