"""Classification cache, CSV tables and run manifests."""

import csv
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from . import __version__
from .catalog import Catalog, PrismSpec
from .vinberg import ClassificationReport, classify

logger = logging.getLogger(__name__)

REPORT_HEADERS = [
    "family", "k", "l", "m", "dimension", "verdict", "a_squared", "a_squared_decimal",
    "ground_field", "V1", "V2", "V3",
]

SYSTOLE_HEADERS = [
    "family", "k", "l", "m", "cosh2_d_exact", "cosh2_d_decimal", "bound_decimal",
]

TABLE_HEADERS = [
    "family", "k", "l", "m", "dimension", "a_squared", "a_squared_decimal",
    "ground_field", "verdict",
]

CLOSED_FORM_HEADERS = [
    "family", "k", "l", "m", "a_squared", "a_squared_decimal", "closed_form", "matches",
]


class ReportCache:
    """JSON lines keyed by catalog checksum and (family, k, l, m).

    New reports are appended. Lines written for another catalog checksum, or
    unreadable ones, are dropped and the file is rewritten on load.
    """

    def __init__(self, path: Path, checksum: str):
        self.path = Path(path)
        self.checksum = checksum
        self._entries: Dict[Tuple[int, int, int, int], dict] = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        kept: List[str] = []
        stale = bad = 0
        with open(self.path) as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    logger.warning("skipping unreadable cache line in %s", self.path)
                    bad += 1
                    continue
                if entry.get("checksum") != self.checksum:
                    stale += 1
                    continue
                key = (entry["family"], entry["k"] or 0, entry["l"] or 0, entry["m"] or 0)
                self._entries[key] = entry["report"]
                kept.append(line)
        if stale:
            logger.info("dropped %d cache entries from another catalog", stale)
        if stale or bad:
            self._rewrite(kept)

    def _rewrite(self, lines: List[str]):
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w") as f:
            f.writelines(line + "\n" for line in lines)
        tmp.replace(self.path)

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, spec: PrismSpec) -> Optional[ClassificationReport]:
        data = self._entries.get(spec.key)
        if data is None:
            return None
        logger.debug("cache hit for %s", spec.label)
        return ClassificationReport.from_dict(data, spec)

    def put(self, report: ClassificationReport, digits: int = 50):
        spec = report.spec
        data = report.to_dict(digits)
        self._entries[spec.key] = data
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as f:
            f.write(json.dumps({"checksum": self.checksum, "family": spec.family,
                                "k": spec.k, "l": spec.l, "m": spec.m, "report": data}) + "\n")
            f.flush()


def cached_classifier(catalog: Catalog, cache: Optional[ReportCache] = None, digits: int = 50):
    """classify() with the cache in front of it."""
    def run(spec: PrismSpec) -> ClassificationReport:
        if cache is not None:
            hit = cache.get(spec)
            if hit is not None:
                return hit
        report = classify(spec, catalog)
        if cache is not None:
            cache.put(report, digits)
        return report
    return run


def report_row(report: ClassificationReport, digits: int = 50) -> dict:
    data = report.to_dict(digits)
    k, l, m = data["params"]
    return {
        "family": data["family"], "k": k, "l": l, "m": m,
        "dimension": data["dimension"], "verdict": data["verdict"],
        "a_squared": str(report.a_squared), "a_squared_decimal": data["a_squared_decimal"],
        "ground_field": data["ground_field"]["description"],
        "V1": data["conditions"].get("V1"), "V2": data["conditions"].get("V2"),
        "V3": data["conditions"].get("V3"),
    }


def write_csv(path: Path, headers: List[str], rows: Iterable[dict], comment: str = ""):
    """Write rows with a DictWriter; missing columns stay empty."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        if comment:
            f.write(f"# {comment}\n")
        w = csv.DictWriter(f, fieldnames=headers, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)


@dataclass
class RunManifest:
    """Inputs and outputs of one batch run, written as manifest.json.

    ``run_id`` is a digest of the inputs only, so repeated runs with the same
    flags and catalog stamp their tables identically; ``started`` is kept out
    of every table.
    """

    command: str
    catalog_checksum: str
    precision: int
    argv: List[str] = field(default_factory=list)
    bounds: Dict[str, object] = field(default_factory=dict)
    started: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    version: str = __version__
    files: List[str] = field(default_factory=list)
    row_counts: Dict[str, int] = field(default_factory=dict)
    discrepancies: Dict[str, List[dict]] = field(default_factory=dict)

    @property
    def run_id(self) -> str:
        key = json.dumps({"command": self.command, "checksum": self.catalog_checksum,
                          "precision": self.precision, "bounds": self.bounds,
                          "version": self.version}, sort_keys=True)
        return hashlib.sha256(key.encode()).hexdigest()[:12]

    def add(self, path: Path):
        self.files.append(str(path))

    def record(self, table_id: str, rows: int, diffs: Iterable[dict]):
        self.row_counts[table_id] = rows
        self.discrepancies[table_id] = list(diffs)

    def write(self, out_dir: Path) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "manifest.json"
        data = asdict(self)
        data["run_id"] = self.run_id
        with open(path, "w") as f:
            json.dump(data, f, indent=2)
        return path
