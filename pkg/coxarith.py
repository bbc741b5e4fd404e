#!/usr/bin/env python3
"""
coxeter-arith — arithmeticity of straight hyperbolic Coxeter prisms.

Classifies prisms as arithmetic (A), properly quasi-arithmetic (PQA) or
not quasi-arithmetic (NQA) with exact algebraic arithmetic, and reproduces
the classification tables.

Usage:
    python coxarith.py classify --family 1 --k 2 --l 3 --m 7
    python coxarith.py enumerate --dim 3 --max-m 12
    python coxarith.py candidates --dim 3
    python coxarith.py candidates --dim 4 --exhaustive --max-m 12
    python coxarith.py reproduce --table type1-arithmetic
    python coxarith.py systole --family 1 --k 2 --l 3 --m 7
    python coxarith.py limit --family 1 --k 2 --l 3 --max-m 100
    python coxarith.py glue --j 1 --k 2 --l 3 --m 7
    python coxarith.py triangles --max 5 --max-m 30
    python coxarith.py separate --family 1 --k 2 --l 3 --m-values 7,11,13
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

import mpmath

from coxeter_arith import algebra
from coxeter_arith.catalog import Catalog
from coxeter_arith.config import load_config
from coxeter_arith.errors import CoxArithError, DiagramError, InvalidSpecError
from coxeter_arith.geometry import (
    commensurability_separation, glued_obstruction_check, systole_limit_report,
    systole_upper_bound,
)
from coxeter_arith.report import FORMATS, render, render_json, render_summary, render_table_result
from coxeter_arith.storage import (
    CLOSED_FORM_HEADERS, REPORT_HEADERS, SYSTOLE_HEADERS, TABLE_HEADERS, ReportCache,
    RunManifest, cached_classifier, report_row, write_csv,
)
from coxeter_arith.tables import load_expected, reproduce
from coxeter_arith.vinberg import arithmetic_triangles, classify_candidates, classify_exhaustive

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INTERNAL = 3
EXIT_DISCREPANCY = 4

logger = logging.getLogger("coxarith")


def banner(*lines):
    print(f"\n{'='*60}", file=sys.stderr)
    for line in lines:
        print(f"  {line}", file=sys.stderr)
    print(f"{'='*60}", file=sys.stderr)


def emit(text: str, out=None):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"  Written {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _classifier(args, config, catalog):
    cache = None
    if config.cache.enabled and not args.no_cache:
        cache = ReportCache(config.cache.path, catalog.checksum)
    return cached_classifier(catalog, cache, args.precision)


def _spec_title(spec) -> str:
    return f"{spec.label} in H^{spec.dimension}"


# ------------------------------------------------------------------ Commands ---

def cmd_classify(args, config, catalog):
    spec = catalog.make_spec(args.family, args.k, args.l, args.m)
    report = _classifier(args, config, catalog)(spec)
    if args.format == "json":
        emit(render_json(report.to_dict(args.precision)), args.out)
    else:
        emit(render([report_row(report, args.precision)], REPORT_HEADERS, args.format,
                    _spec_title(spec)), args.out)
    return EXIT_OK


def cmd_enumerate(args, config, catalog):
    specs = catalog.enumerate(args.dim, args.max_m, args.family)
    emit(render([s.to_dict() for s in specs], ["family", "k", "l", "m", "dimension", "compact"],
                args.format, f"Prisms in H^{args.dim}, m <= {args.max_m}"), args.out)
    return EXIT_OK


def cmd_candidates(args, config, catalog):
    classify = _classifier(args, config, catalog)
    if args.exhaustive:
        banner(f"Classifying every prism in H^{args.dim} with m <= {args.max_m}")
        reports = classify_exhaustive(catalog, args.dim, args.max_m, classify)
    else:
        banner(f"Classifying the candidate set in H^{args.dim}")
        reports = classify_candidates(catalog, args.dim, classify)
    rows = [report_row(report, args.precision) for report in reports]
    emit(render(rows, REPORT_HEADERS, args.format, f"Candidates in H^{args.dim}"), args.out)
    return EXIT_OK


def cmd_reproduce(args, config, catalog):
    expected = load_expected(config.catalog.expected_rows)
    tables = args.table or list(expected.tables)
    manifest = RunManifest("reproduce", catalog.checksum, args.precision, argv=args.argv,
                           bounds={"tables": tables, "max_m": args.max_m, "format": args.format})
    banner("coxeter-arith table reproduction",
           datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
           f"Tables: {', '.join(tables)}",
           f"Run: {manifest.run_id}")
    reproduction = reproduce(args.table, catalog, _classifier(args, config, catalog),
                             expected, args.precision, args.max_m)
    out_dir = Path(args.out) if args.out else None
    for result in reproduction.tables:
        headers = CLOSED_FORM_HEADERS if result.spec.id == "closed-forms" else TABLE_HEADERS
        manifest.record(result.spec.id, len(result.rows), [d.to_dict() for d in result.diffs])
        if out_dir and args.format == "csv":
            path = out_dir / f"{result.spec.id}.csv"
            write_csv(path, headers, result.rows, f"run {manifest.run_id}")
            print(f"  Written {path}", file=sys.stderr)
            manifest.add(path)
            continue
        text = render_table_result(result, headers, args.format, manifest.run_id)
        if out_dir:
            path = out_dir / f"{result.spec.id}.{args.format}"
            emit(text, path)
            manifest.add(path)
        else:
            emit(text + "\n")
    summary = render_summary(reproduction, args.format)
    if out_dir:
        path = out_dir / f"summary.{args.format}"
        emit(summary, path)
        manifest.add(path)
        manifest.write(out_dir)
    else:
        emit(summary)
    for diff in reproduction.discrepancies:
        logger.warning("%s: %s %s (expected %s, computed %s)", diff.table, diff.kind,
                       diff.label, diff.expected, diff.computed)
    return EXIT_OK if reproduction.ok else EXIT_DISCREPANCY


def cmd_systole(args, config, catalog):
    spec = catalog.make_spec(args.family, args.k, args.l, args.m)
    bound = systole_upper_bound(spec, catalog, args.precision)
    emit(f"{spec.label}: systole <= {mpmath.nstr(bound, args.precision)}\n", args.out)
    return EXIT_OK


def cmd_limit(args, config, catalog):
    rows = systole_limit_report(args.family, args.k, args.l, args.max_m, catalog,
                                args.precision, args.exact_up_to)
    title = f"type {args.family} ({args.k},{args.l},m), m <= {args.max_m}"
    emit(render([r.to_dict(args.precision) for r in rows], SYSTOLE_HEADERS, args.format, title),
         args.out)
    return EXIT_OK


def cmd_glue(args, config, catalog):
    record = glued_obstruction_check(args.j, args.k, args.l, args.m, catalog,
                                     full=args.full, direct=args.direct)
    if args.format == "json":
        emit(render_json(record.to_dict()), args.out)
    elif not record.applicable:
        emit(f"({args.j},{args.k},{args.l},{args.m}): 5 divides m, no obstruction\n", args.out)
    else:
        emit(f"({args.j},{args.k},{args.l},{args.m}): {record.verdict.value}; "
             f"sqrt(5) in k(P), not in k(F) = {record.triangle_field.describe()}\n", args.out)
    return EXIT_OK


def cmd_triangles(args, config, catalog):
    found = arithmetic_triangles(args.max_kl, args.max_m, exact=args.exact)
    rows = [{"k": k, "l": l, "m": m} for k, l, m in found]
    emit(render(rows, ["k", "l", "m"], args.format, "Arithmetic triangle groups"), args.out)
    return EXIT_OK


def cmd_separate(args, config, catalog):
    values = [int(v) for v in args.m_values.split(",") if v.strip()]
    specs = [catalog.make_spec(args.family, args.k, args.l, m) for m in values]
    classes = commensurability_separation(specs, catalog)
    rows = [{"ground_field": c.field.describe(), "prisms": ", ".join(s.label for s in c.specs),
             "status": c.status} for c in classes]
    emit(render(rows, ["ground_field", "prisms", "status"], args.format,
                f"{len(classes)} ground-field classes"), args.out)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "enumerate": cmd_enumerate,
    "candidates": cmd_candidates,
    "reproduce": cmd_reproduce,
    "systole": cmd_systole,
    "limit": cmd_limit,
    "glue": cmd_glue,
    "triangles": cmd_triangles,
    "separate": cmd_separate,
}


def build_parser(config) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=config.report.format)
    common.add_argument("--out", help="Write to this file (directory for reproduce)")
    common.add_argument("--precision", type=int, default=config.report.precision,
                        help="Decimal digits for display")
    common.add_argument("--no-cache", action="store_true", help="Do not read or write the cache")

    prism = argparse.ArgumentParser(add_help=False)
    prism.add_argument("--family", type=int, required=True)
    prism.add_argument("--k", type=int)
    prism.add_argument("--l", type=int)
    prism.add_argument("--m", type=int)

    ap = argparse.ArgumentParser(description="Arithmeticity of straight hyperbolic Coxeter prisms")
    ap.add_argument("--config", type=Path, help="Path to config.json")
    ap.add_argument("--verbose", action="store_true", help="Debug logging")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common, prism], help="Classify one prism")

    p = sub.add_parser("enumerate", parents=[common], help="List valid prisms")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--max-m", type=int, default=config.catalog.max_m)
    p.add_argument("--family", type=int)

    p = sub.add_parser("candidates", parents=[common], help="Classify the finite candidate set")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--exhaustive", action="store_true", help="Classify every enumerated prism, no pruning")
    p.add_argument("--max-m", type=int, default=config.catalog.max_m)

    p = sub.add_parser("reproduce", parents=[common], help="Reproduce the classification tables")
    p.add_argument("--table", action="append", help="Table id; repeat for several (default all)")
    p.add_argument("--max-m", type=int, default=config.catalog.max_m)

    sub.add_parser("systole", parents=[common, prism], help="Systole upper bound of one prism")

    p = sub.add_parser("limit", parents=[common], help="cosh^2 d and bounds as m grows")
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--max-m", type=int, default=100)
    p.add_argument("--exact-up-to", type=int, default=config.catalog.max_m)

    p = sub.add_parser("glue", parents=[common], help="Glued prism obstruction certificate")
    p.add_argument("--j", type=int, choices=(1, 2), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--full", action="store_true", help="Compute k(P) of the glued prism")
    p.add_argument("--direct", action="store_true", help="Also run V1 and V2 on the glued prism")

    p = sub.add_parser("triangles", parents=[common], help="Arithmetic triangle groups")
    p.add_argument("--max", "--max-kl", dest="max_kl", type=int, default=5,
                   help="Largest k and l")
    p.add_argument("--max-m", type=int, default=config.catalog.max_m)
    p.add_argument("--exact", action="store_true", help="Skip the numeric conjugate screen")

    p = sub.add_parser("separate", parents=[common], help="Group prisms by ground field")
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m-values", required=True, help="Comma-separated m values")
    return ap


def main(argv=None) -> int:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    config = load_config(known.config)

    args = build_parser(config).parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, config.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    algebra.configure(config.algebra)

    try:
        catalog = Catalog.load(config.catalog.path)
        return COMMANDS[args.command](args, config, catalog)
    except (InvalidSpecError, DiagramError) as exc:
        print(f"  Error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CoxArithError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
