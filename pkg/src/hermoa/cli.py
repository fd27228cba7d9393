"""Command-line front end.

Summaries go to stdout as one JSON object (or key: value lines with
``--format text``); human-readable tables go to stderr under ``--verbose``.
Exit status: 0 when every checked property holds, 1 on a property
violation, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import design, ff, geometry, oa
from .errors import CapExceededError, OAFormatError

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _emit(summary: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(summary, sort_keys=False))
        return
    for key, value in _flatten(summary):
        print(f"{key}: {value}")


def _flatten(d: dict, prefix: str = ""):
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        else:
            yield name, json.dumps(value) if isinstance(value, (list, bool)) or value is None else value


def _log(args, text: str) -> None:
    if args.verbose:
        print(text, file=sys.stderr)


def _check_qn(args) -> None:
    ff.prime_power(args.q)
    if args.n < 2:
        raise ValueError("n must be at least 2")


def cmd_gen_oa(args) -> int:
    _check_qn(args)
    build = oa.build_A0 if args.variant == "A0" else oa.build_A
    A = build(args.q, args.n)
    path = args.output or f"{args.variant}_q{args.q}_n{args.n}.oa"
    oa.export_oa(A, path)
    report = oa.verify(A, threads=args.threads)
    if args.variant == "A0":
        structure_ok = bool(report.simple)
    else:
        structure_ok = report.duplicate_classes == {args.q: args.q ** (2 * args.n - 1)} and oa.shift_classes_match(A)
    ok = report.meets_claim and structure_ok
    _log(args, f"{args.variant}(q={args.q}, n={args.n}): k={A.k} N={A.N} index={report.index_at}")
    if args.verbose and A.k * A.N <= 4096:
        for row in A.cells.tolist():
            print(" ".join(map(str, row)), file=sys.stderr)
    _emit(
        {
            "command": "gen-oa",
            "q": args.q,
            "n": args.n,
            "variant": args.variant,
            "path": str(path),
            "N": A.N,
            "k": A.k,
            "strength": report.achieved_strength,
            "index": report.index_at.get(A.strength),
            "simple": report.simple,
            "column_multiplicities": {str(m): c for m, c in sorted(report.duplicate_classes.items())},
            "ok": ok,
        },
        args.format,
    )
    if not ok:
        print(f"property violation: {report.first_violation() or 'column structure'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify_oa(args) -> int:
    A = oa.import_oa(args.input)
    t = args.t if args.t is not None else A.strength
    report = oa.verify(A, t=t, threads=args.threads)
    if args.t is not None:
        report.claimed_strength = args.t
        report.claimed_index = A.N // A.q**args.t
    summary = {"command": "verify-oa", "path": args.input, "N": A.N, "k": A.k, "q": A.q}
    summary.update(report.as_dict())
    _emit(summary, args.format)
    if not report.meets_claim:
        first = report.first_violation() or f"index {report.index_at.get(t)} differs from claimed {A.index}"
        print(f"strength {t} violated: {first}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _design_checks(S: design.IncidenceStructure, with_correspondence: bool) -> tuple[dict, bool]:
    d = design.verify_2design(S)
    a = design.verify_affine(S)
    lines = design.line_sizes(S)
    lines_ok = S.q == 2 or set(lines) == {S.q}
    out = {
        "design": d.as_dict(),
        "affine": a.as_dict(),
        "line_sizes": {str(k): v for k, v in sorted(lines.items())},
        "lines_asserted": S.q > 2,
        "lines_ok": lines_ok,
    }
    ok = d.ok and a.ok and lines_ok
    if with_correspondence:
        c = design.oa_design_correspondence(S, oa.build_A0(S.q, S.n))
        out["correspondence"] = c.as_dict()
        ok = ok and c.ok
    return out, ok


def cmd_gen_design(args) -> int:
    _check_qn(args)
    S = design.build_blocks(args.q, args.n)
    path = args.output or f"design_q{args.q}_n{args.n}.json"
    checks, ok = _design_checks(S, with_correspondence=True)
    design.export_design(S, path)
    _log(args, _design_table(checks))
    summary = {"command": "gen-design", "q": args.q, "n": args.n, "path": str(path), "v": S.v, "b": S.b}
    summary.update(checks)
    summary["ok"] = ok
    _emit(summary, args.format)
    if not ok:
        print("property violation in design checks", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify_design(args) -> int:
    S = design.import_design(args.input)
    checks, ok = _design_checks(S, with_correspondence=False)
    _log(args, _design_table(checks))
    summary = {"command": "verify-design", "path": args.input, "q": S.q, "n": S.n, "v": S.v, "b": S.b}
    summary.update(checks)
    summary["ok"] = ok
    _emit(summary, args.format)
    if not ok:
        d = checks["design"]
        first = d["violations"][0] if d["violations"] else checks["affine"]["axiom_b_failures"][:1]
        print(f"design property violated: {first}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def _design_table(checks: dict) -> str:
    d, a = checks["design"], checks["affine"]
    e = d["expected"]
    rows = [
        ("v", d["v"], e["v"]),
        ("b", d["b"], e["b"]),
        ("block size", d["block_sizes"], e["k"]),
        ("lambda", d["lambdas"], e["lambda"]),
        ("r", d["replication"], e["r"]),
        ("intersections", a["intersection_sizes"], a["allowed_sizes"]),
        ("parallel classes", a["parallel_class_count"], a["expected_parallel_classes"]),
        ("line sizes", checks["line_sizes"], "q" if checks["lines_asserted"] else "(reported)"),
    ]
    return "\n".join(f"{name:<17} {got!s:<30} expected {want}" for name, got, want in rows)


def cmd_field_table(args) -> int:
    spec = ff.make_field(args.p, args.e)
    sys.stdout.write(ff.field_table_text(spec))
    return EXIT_OK


def cmd_census(args) -> int:
    _check_qn(args)
    census = geometry.variety_census(args.q, args.n)
    summary = {"command": "census"}
    summary.update(census.as_dict())
    _emit(summary, args.format)
    return EXIT_OK if census.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="verifier worker count")
    common.add_argument("--verbose", action="store_true", help="human-readable tables on stderr")

    qn = argparse.ArgumentParser(add_help=False)
    qn.add_argument("--q", type=int, required=True, help="prime power")
    qn.add_argument("--n", type=int, required=True, help="projective dimension, at least 2")

    parser = argparse.ArgumentParser(prog="hermoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-oa", parents=[common, qn], help="build A or A0 and write it as an OA file")
    p.add_argument("--variant", choices=["A", "A0"], default="A0")
    p.add_argument("--output", help="OA file path (default <variant>_q<q>_n<n>.oa)")
    p.set_defaults(func=cmd_gen_oa)

    p = sub.add_parser("verify-oa", parents=[common], help="check an OA file against its header claims")
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int, help="strength to verify (default: header value)")
    p.set_defaults(func=cmd_verify_oa)

    p = sub.add_parser("gen-design", parents=[common, qn], help="build the design and check its axioms")
    p.add_argument("--output", help="design JSON path (default design_q<q>_n<n>.json)")
    p.set_defaults(func=cmd_gen_design)

    p = sub.add_parser("verify-design", parents=[common], help="check a design JSON file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_verify_design)

    p = sub.add_parser("field-table", parents=[common], help="print GF(p^e) tables, T0 and C")
    p.add_argument("p", type=int)
    p.add_argument("e", type=int)
    p.set_defaults(func=cmd_field_table)

    p = sub.add_parser("census", parents=[common, qn], help="point and line census of the canonical variety")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        args.threads = 1
    try:
        return args.func(args)
    except (OAFormatError, CapExceededError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
