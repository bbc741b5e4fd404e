"""Configuration loading and dataclasses for classification runs."""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


SCRIPT_DIR = Path(__file__).parent.parent
PACKAGE_DIR = Path(__file__).parent
CACHE_ENV_VAR = "COXARITH_CACHE"


@dataclass
class AlgebraConfig:
    weight_bound: int = 12     # primitive element search tries weights ±1 … ±weight_bound
    refine_bits: int = 64      # first refinement width 2^-refine_bits for sign decisions


@dataclass
class CatalogConfig:
    path: Path = PACKAGE_DIR / "data" / "prisms.cat"
    expected_rows: Path = PACKAGE_DIR / "data" / "expected_rows.json"
    max_m: int = 30


@dataclass
class ReportConfig:
    precision: int = 50
    format: str = "md"
    out_dir: Path = SCRIPT_DIR / "data" / "tables"


@dataclass
class CacheConfig:
    enabled: bool = True
    path: Path = SCRIPT_DIR / "data" / "cache.jsonl"


@dataclass
class Config:
    algebra: AlgebraConfig = field(default_factory=AlgebraConfig)
    catalog: CatalogConfig = field(default_factory=CatalogConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    cache: CacheConfig = field(default_factory=CacheConfig)
    log_level: str = "INFO"


def _resolve(value, default: Path) -> Path:
    if not value:
        return default
    p = Path(value)
    return p if p.is_absolute() else SCRIPT_DIR / p


def load_config(path: Optional[Path] = None) -> Config:
    """Load config from JSON file and return typed Config object.

    A missing file yields the defaults. The cache path can be overridden
    with the COXARITH_CACHE environment variable.
    """
    config_path = path or (SCRIPT_DIR / "config.json")
    raw = {}
    if config_path.exists():
        with open(config_path) as f:
            raw = json.load(f)

    algebra_raw = raw.get("algebra", {})
    algebra = AlgebraConfig(
        weight_bound=algebra_raw.get("weight_bound", 12),
        refine_bits=algebra_raw.get("refine_bits", 64),
    )

    catalog_raw = raw.get("catalog", {})
    catalog = CatalogConfig(
        path=_resolve(catalog_raw.get("path"), CatalogConfig.path),
        expected_rows=_resolve(catalog_raw.get("expected_rows"), CatalogConfig.expected_rows),
        max_m=catalog_raw.get("max_m", 30),
    )

    report_raw = raw.get("report", {})
    report = ReportConfig(
        precision=report_raw.get("precision", 50),
        format=report_raw.get("format", "md"),
        out_dir=_resolve(report_raw.get("out_dir"), ReportConfig.out_dir),
    )

    cache_raw = raw.get("cache", {})
    cache_path = os.environ.get(CACHE_ENV_VAR) or cache_raw.get("path")
    cache = CacheConfig(
        enabled=cache_raw.get("enabled", True),
        path=_resolve(cache_path, CacheConfig.path),
    )

    return Config(
        algebra=algebra,
        catalog=catalog,
        report=report,
        cache=cache,
        log_level=raw.get("log_level", "INFO"),
    )
