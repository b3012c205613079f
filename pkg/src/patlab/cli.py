"""Command-line front end: every subcommand is a thin adapter over the
library, producing byte-deterministic csv, json, or table reports.

Exit codes: 0 verified/equal/success, 1 verification failed (report carries
the counterexample), 2 usage error, 3 experiment (neutral outcome by design).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .enumeration import DEFAULT_NODE_BUDGET, count_sequence
from .errors import ClassExpressionError, PatlabError, UsageError
from .maps import apply_named_map
from .patterns import parse_class_expression
from .perms import format_perm, parse_perm
from .verification import (
    certify_map,
    discover_basis,
    distant_growth_bounds,
    growth_diagnostics,
    sandwich_check,
    survey_almost_distant,
    verify_wilf,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_EXPERIMENT = 3

HARD_MAX_N = 12

_DISTANT_MACRO_RE = re.compile(r"^\s*D\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patlab",
        description="Exact enumeration, maps, and verification for distant and "
        "almost-distant permutation classes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats=("csv", "json", "table")) -> None:
        p.add_argument("--format", choices=formats, default="table")
        p.add_argument("--out", default=None, help="write the report to this file")
        p.add_argument("--budget", type=int, default=None, help="node budget override")
        p.add_argument("--no-parallel", action="store_true", help="force sequential traversal")

    p = sub.add_parser("count", help="count Av_n for a class expression")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("verify-wilf", help="compare two avoidance count sequences exactly")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("map", help="apply F, Finv, G, Ginv, or H to one permutation")
    p.add_argument("--map", dest="map_name", required=True, choices=["F", "Finv", "G", "Ginv", "H"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--perm", required=True)
    common(p, formats=("json", "table"))

    p = sub.add_parser("certify", help="certify a map over fully enumerated classes")
    p.add_argument("--map", dest="map_name", required=True, choices=["F", "G", "H"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    common(p, formats=("json", "table"))

    p = sub.add_parser("basis", help="discover the forbidden basis of the image of H")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="maximum pattern length to search")
    common(p, formats=("json", "table"))

    p = sub.add_parser("sandwich", help="check the count sandwich around D(k,j)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("growth", help="finite-n growth diagnostics for a class")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("survey", help="group all almost-distant variants of a pattern (experiment)")
    p.add_argument("--perm", required=True, help="the underlying classical pattern")
    p.add_argument("--n", type=int, required=True)
    common(p)

    return parser


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("PATLAB_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PATLAB_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_NODE_BUDGET


def _check_n(n: int) -> int:
    if n < 0:
        raise UsageError(f"--n must be >= 0, got {n}")
    if n > HARD_MAX_N:
        raise UsageError(f"--n is capped at {HARD_MAX_N} regardless of budget, got {n}")
    return n


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _table(rows: list[list], header: list[str]) -> str:
    widths = [len(h) for h in header]
    cells = [[str(c) for c in row] for row in rows]
    for row in cells:
        for t, c in enumerate(row):
            widths[t] = max(widths[t], len(c))
    def fmt(row):
        return "  ".join(str(c).rjust(widths[t]) for t, c in enumerate(row))
    return "\n".join([fmt(header)] + [fmt(r) for r in cells]) + "\n"


def _counts_csv(pairs) -> str:
    return "n,count\n" + "".join(f"{n},{c}\n" for n, c in pairs)


def cmd_count(args) -> tuple[int, str]:
    basis = parse_class_expression(args.klass)
    seq = count_sequence(
        _check_n(args.n), basis, parallel=not args.no_parallel, node_budget=_budget(args)
    )
    if args.format == "csv":
        return EXIT_OK, _counts_csv(seq.counts)
    if args.format == "json":
        return EXIT_OK, _dump_json(
            {
                "class": basis.label,
                "max_n": args.n,
                "method": seq.method,
                "counts": [list(pair) for pair in seq.counts],
            }
        )
    return EXIT_OK, _table([[n, c] for n, c in seq.counts], ["n", "count"])


def cmd_verify_wilf(args) -> tuple[int, str]:
    left = parse_class_expression(args.left)
    right = parse_class_expression(args.right)
    report = verify_wilf(
        left, right, _check_n(args.n), parallel=not args.no_parallel, node_budget=_budget(args)
    )
    code = EXIT_OK if report.equal else EXIT_FAILED
    if args.format == "json":
        return code, _dump_json(report.as_json_dict())
    if args.format == "csv":
        out = "n,left,right\n" + "".join(
            f"{n},{a},{b}\n"
            for (n, a), (_, b) in zip(report.left.counts, report.right.counts)
        )
        return code, out
    rows = [
        [n, a, b, "=" if a == b else "!"]
        for (n, a), (_, b) in zip(report.left.counts, report.right.counts)
    ]
    verdict = "equal" if report.equal else f"diverges at n={report.diverges_at}"
    return code, _table(rows, ["n", "left", "right", ""]) + f"verdict: {verdict}\n"


def cmd_map(args) -> tuple[int, str]:
    p = parse_perm(args.perm)
    result = apply_named_map(args.map_name, p, args.k, i=args.i, j=args.j)
    if args.format == "json":
        return EXIT_OK, _dump_json(result.as_json_dict())
    return EXIT_OK, format_perm(result.output) + "\n"


def cmd_certify(args) -> tuple[int, str]:
    report = certify_map(
        args.map_name,
        args.k,
        i=args.i,
        j=args.j,
        max_n=_check_n(args.n),
        node_budget=_budget(args),
    )
    code = EXIT_OK if report.certified else EXIT_FAILED
    if args.format == "json":
        return code, _dump_json(report.as_json_dict())
    rows = [
        [
            r["n"],
            r["source_size"],
            r["target_size"],
            r["image_size"],
            r["injective"],
            r["surjective"],
            r["roundtrip_ok"],
        ]
        for r in report.rows
    ]
    head = ["n", "source", "target", "image", "injective", "surjective", "roundtrip"]
    verdict = "certified" if report.certified else "FAILED"
    return code, _table(rows, head) + f"{report.expectation}: {verdict}\n"


def cmd_basis(args) -> tuple[int, str]:
    result = discover_basis(args.k, args.j, _check_n(args.n), node_budget=_budget(args))
    code = EXIT_OK if result.matches_predicted in (True, None) else EXIT_FAILED
    if args.format == "json":
        return code, _dump_json(result.as_json_dict())
    lines = ["discovered basis (minimal non-members of the image):"]
    lines.extend(f"  {format_perm(q)}" for q in result.discovered)
    if result.predicted is not None:
        lines.append(f"predicted: {result.predicted.label}")
        lines.append(f"match: {result.matches_predicted}")
    return code, "\n".join(lines) + "\n"


def cmd_sandwich(args) -> tuple[int, str]:
    report = sandwich_check(args.k, args.j, _check_n(args.n), node_budget=_budget(args))
    if args.format == "json":
        return EXIT_OK, _dump_json(report.as_json_dict())
    if args.format == "csv":
        out = "n,lower,mid,upper\n" + "".join(
            f"{r['n']},{r['lower']},{r['mid']},{r['upper']}\n" for r in report.rows
        )
        return EXIT_OK, out
    rows = [[r["n"], r["lower"], r["mid"], r["upper"]] for r in report.rows]
    return EXIT_OK, _table(rows, ["n", "lower", "mid", "upper"]) + "verdict: holds\n"


def cmd_growth(args) -> tuple[int, str]:
    basis = parse_class_expression(args.klass)
    bounds = None
    m = _DISTANT_MACRO_RE.match(args.klass)
    if m:
        bounds = distant_growth_bounds(int(m.group(1)))
    diag = growth_diagnostics(
        basis,
        _check_n(args.n),
        bounds,
        parallel=not args.no_parallel,
        node_budget=_budget(args),
    )
    if args.format == "json":
        return EXIT_OK, _dump_json(diag.as_json_dict())
    if args.format == "csv":
        return EXIT_OK, _counts_csv(diag.counts.counts)
    roots = dict(diag.roots)
    ratios = dict(diag.ratios)
    rows = []
    for n, c in diag.counts.counts:
        ratio = ratios.get(n)
        rows.append(
            [
                n,
                c,
                f"{ratio.numerator}/{ratio.denominator}" if ratio else "-",
                roots.get(n, "-"),
            ]
        )
    out = _table(rows, ["n", "count", "ratio", "root"])
    out += "note: finite-n diagnostics\n"
    if diag.reference_bounds:
        out += f"reference bounds: {diag.reference_bounds[0]}, {diag.reference_bounds[1]}\n"
    return EXIT_OK, out


def cmd_survey(args) -> tuple[int, str]:
    q = parse_perm(args.perm)
    report = survey_almost_distant(
        q, _check_n(args.n), parallel=not args.no_parallel, node_budget=_budget(args)
    )
    if args.format == "json":
        return EXIT_EXPERIMENT, _dump_json(report.as_json_dict())
    if args.format == "csv":
        out = "group,j,i\n"
        for g, (_, specs) in enumerate(report.groups):
            out += "".join(f"{g},{j},{i}\n" for j, i in specs)
        return EXIT_EXPERIMENT, out
    lines = ["EXPERIMENT: empirical Wilf groups"]
    for g, (counts, specs) in enumerate(report.groups):
        lines.append(f"group {g}: specs {list(specs)}")
        lines.append(f"  counts {list(counts)}")
    return EXIT_EXPERIMENT, "\n".join(lines) + "\n"


_COMMANDS = {
    "count": cmd_count,
    "verify-wilf": cmd_verify_wilf,
    "map": cmd_map,
    "certify": cmd_certify,
    "basis": cmd_basis,
    "sandwich": cmd_sandwich,
    "growth": cmd_growth,
    "survey": cmd_survey,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = _COMMANDS[args.command](args)
    except ClassExpressionError as exc:
        print(exc.caret_diagnostic(), file=sys.stderr)
        return exc.exit_code
    except PatlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
