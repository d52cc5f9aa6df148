"""Command-line interface: analyze, mesh-audit, interp-error, sweep, verify.

Exit codes: 0 success, 1 property failure, 2 input/parse error, 3 degenerate
geometry, 4 inadmissible (k, m, p).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .errors import DegenerateElement, InvalidPForKM, NonFinite, TiaError
from .experiments import (
    CSV_COLUMNS,
    ElementFamily,
    bound_sweep,
    error_ratio,
    per_element_max,
    records_to_csv,
)
from .polynomials import polynomial_from_dict
from .projection import geometry_report
from .seminorms import p_rule_violation
from .simplex import diameter, tetrahedron_from_dict, validate_tetrahedron
from .verify import DEFAULT_SEED, SUITES, run_suites

DEFAULT_SLIVER_THRESHOLD = 10.0  # audit heuristic: flag when R_K / h_K exceeds this

AUDIT_COLUMNS = ["index", "h_K", "rho_K", "R_sphere", "R_K", "ratio", "sliver_flag", "degenerate"]


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _json_default(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    raise TypeError(f"not JSON serializable: {value!r}")


def _thread_count(args) -> int:
    env = os.environ.get("TIA_THREADS")
    if env is not None:
        return max(1, int(env))
    if getattr(args, "threads", None):
        return max(1, args.threads)
    return os.cpu_count() or 1


def cmd_analyze(args) -> int:
    try:
        data = _load_json(args.input)
        tet = tetrahedron_from_dict(data)
    except DegenerateElement as exc:
        print(f"error: degenerate element: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError, NonFinite, json.JSONDecodeError) as exc:
        print(f"error: cannot read tetrahedron: {exc}", file=sys.stderr)
        return 2
    report = geometry_report(tet)
    json.dump(report.as_dict(), sys.stdout, indent=2)
    print()
    return 0


def cmd_mesh_audit(args) -> int:
    try:
        data = _load_json(args.mesh)
        vertices = data["vertices"]
        tets = data["tets"]
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot read mesh: {exc}", file=sys.stderr)
        return 2
    rows = []
    for index, ids in enumerate(tets):
        try:
            corners = [vertices[i] for i in ids]
            if len(ids) != 4:
                raise ValueError(f"element {index} does not have 4 vertex indices")
            tet = validate_tetrahedron(corners)
            report = geometry_report(tet)
            ratio = report.R_K / report.h_K
            rows.append(
                {
                    "index": index,
                    "h_K": report.h_K,
                    "rho_K": report.rho_K,
                    "R_sphere": report.R_sphere,
                    "R_K": report.R_K,
                    "ratio": ratio,
                    "sliver_flag": ratio > args.sliver_threshold,
                    "degenerate": False,
                }
            )
        except (DegenerateElement, NonFinite, ValueError, IndexError, TypeError):
            rows.append({"index": index, "degenerate": True})
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=2)
        print()
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(AUDIT_COLUMNS)
        for row in rows:
            writer.writerow([row.get(col, "") for col in AUDIT_COLUMNS])
    return 0


def cmd_interp_error(args) -> int:
    violation = p_rule_violation(args.k, args.m, args.p)
    if violation is not None:
        print(f"error: invalid (k, m, p): {violation}", file=sys.stderr)
        return 4
    try:
        tet = tetrahedron_from_dict(_load_json(args.input))
        poly = polynomial_from_dict(_load_json(args.function))
    except DegenerateElement as exc:
        print(f"error: degenerate element: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError, NonFinite, json.JSONDecodeError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    record = error_ratio(tet, poly, args.k, args.m, args.p)
    json.dump(record.as_dict(), sys.stdout, indent=2, default=_json_default)
    print()
    return 0


def _family_from_args(args) -> ElementFamily:
    if args.family == "sliver":
        if not args.h_grid:
            raise ValueError("--family sliver requires --h-grid")
        return ElementFamily(kind="sliver", grid=args.h_grid, alpha_exponent=args.alpha)
    if args.family == "squeezed":
        if not args.b_grid:
            raise ValueError("--family squeezed requires --b-grid")
        return ElementFamily(
            kind="squeezed", grid=args.b_grid, reference=args.reference, squeeze_y=args.a
        )
    if args.family == "needle":
        if not args.aspect_grid:
            raise ValueError("--family needle requires --aspect-grid")
        return ElementFamily(kind="needle", grid=args.aspect_grid)
    return ElementFamily(kind="random", seed=args.seed, count=args.count)


def cmd_sweep(args) -> int:
    violation = p_rule_violation(args.k, args.m, args.p)
    if violation is not None:
        print(f"error: invalid (k, m, p): {violation}", file=sys.stderr)
        return 4
    try:
        family = _family_from_args(args)
    except (ValueError, TiaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = bound_sweep(
        family, args.k, args.m, args.p, seed=args.seed, threads=_thread_count(args)
    )
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        records_to_csv(records, handle)
    print(f"wrote {len(records)} records to {args.out}")
    print(f"{'h_param':>12}  {'max ratio_projected':>20}  {'max ratio_naive':>18}")
    for row in per_element_max(records):
        print(
            f"{row['h_param']:>12.6g}  {row['max_ratio_projected']:>20.6g}  "
            f"{row['max_ratio_naive']:>18.6g}"
        )
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failures = 0
    for suite_name, check in run_suites(names, samples=args.samples, seed=args.seed):
        status = "PASS" if check.passed else "FAIL"
        detail = f"  [{check.detail}]" if check.detail and not check.passed else ""
        print(f"{status}  {suite_name}: {check.name} ({check.cases} cases){detail}")
        if not check.passed:
            failures += 1
    print(f"{'OK' if failures == 0 else 'FAILED'}: {failures} failing properties")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tia",
        description="Tetrahedral interpolation analysis: projected circumradius, "
        "Lagrange interpolants, and interpolation-error bound checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="geometry report for one tetrahedron JSON file")
    analyze.add_argument("input", help="path to {'vertices': [[x,y,z] x4]} JSON")
    analyze.set_defaults(func=cmd_analyze)

    audit = sub.add_parser("mesh-audit", help="per-element quality rows for a mesh JSON file")
    audit.add_argument("mesh", help="path to {'vertices': [...], 'tets': [...]} JSON")
    audit.add_argument("--format", choices=("json", "csv"), default="json")
    audit.add_argument("--sliver-threshold", type=float, default=DEFAULT_SLIVER_THRESHOLD)
    audit.set_defaults(func=cmd_mesh_audit)

    interp = sub.add_parser("interp-error", help="one bound-quotient record for a custom function")
    interp.add_argument("input", help="tetrahedron JSON path")
    interp.add_argument("--function", required=True, help="polynomial JSON path")
    interp.add_argument("--k", type=int, required=True)
    interp.add_argument("--m", type=int, required=True)
    interp.add_argument("--p", type=_parse_p, required=True)
    interp.set_defaults(func=cmd_interp_error)

    sweep = sub.add_parser("sweep", help="bound-ratio sweep over a degenerating family")
    sweep.add_argument("--family", choices=("sliver", "squeezed", "needle", "random"), required=True)
    sweep.add_argument("--alpha", type=float, default=2.5, help="sliver flatness exponent")
    sweep.add_argument("--h-grid", type=_parse_grid, default=(), help="comma-separated h values")
    sweep.add_argument("--b-grid", type=_parse_grid, default=(), help="comma-separated z-stretch values")
    sweep.add_argument("--aspect-grid", type=_parse_grid, default=(), help="comma-separated needle aspects")
    sweep.add_argument("--reference", choices=("i", "ii"), default="i")
    sweep.add_argument("--a", type=float, default=1.0, help="y-squeeze of the squeezed family")
    sweep.add_argument("--count", type=int, default=10, help="element count for the random family")
    sweep.add_argument("--k", type=int, required=True)
    sweep.add_argument("--m", type=int, required=True)
    sweep.add_argument("--p", type=_parse_p, required=True)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: available parallelism; TIA_THREADS overrides)")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run the seeded property suites")
    verify.add_argument("--suite", choices=("all", *SUITES), default="all")
    verify.add_argument("--samples", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidPForKM as exc:
        print(f"error: invalid (k, m, p): {exc}", file=sys.stderr)
        return 4
    except DegenerateElement as exc:
        print(f"error: degenerate element: {exc}", file=sys.stderr)
        return 3
    except TiaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
