"""Command-line entry point: expand, oracle, verify, identity."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable

from . import theorems as T
from .enumeration import (
    DEFAULT_ORACLE_LIMIT,
    MAX_ORACLE_LIMIT,
    ConstraintSyntaxError,
    Tag,
    count,
    listing,
    parse_constraint,
)
from .qexpr import QExprError, check_identity, eval_text
from .qproducts import QProductError, UnknownSeries, is_registry_name, resolve
from .report import VerificationReport, reports_to_json
from .series import SeriesError, to_dict

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qseries-lab", description="Exact q-series expansion, partition oracles and identity checks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("expand", parents=[fmt], help="print coefficients of a named series or expression")
    p.add_argument("target", help="registry name (reg4, DE3, DEgeq:3, ...) or expression text")
    p.add_argument("--order", type=_nonnegative, default=200)

    p = sub.add_parser("oracle", parents=[fmt], help="count partitions of n in a family by enumeration")
    p.add_argument("constraint", help="reg:4, ped, de1, deGeq:3, deeExact:1, cubic, ...")
    p.add_argument("n", type=_nonnegative)
    p.add_argument("--list", action="store_true", help="also print every qualifying partition")

    p = sub.add_parser("verify", parents=[fmt], help="run checks and report PASS/FAIL")
    p.add_argument("target", help="'all', 'oracles', a check group or a full check id")
    p.add_argument("--order", type=_positive, default=200)
    p.add_argument("--kmax", type=_positive, default=4)
    p.add_argument("--oracle-limit", type=_nonnegative, default=DEFAULT_ORACLE_LIMIT)
    p.add_argument(
        "--allow-large-oracle",
        action="store_true",
        help=f"permit --oracle-limit above {MAX_ORACLE_LIMIT}",
    )
    p.add_argument("--timings", action="store_true", help="keep runtimes in json output")

    p = sub.add_parser("identity", parents=[fmt], help="compare two expressions coefficientwise")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--order", type=_nonnegative, default=200)
    p.add_argument("--timings", action="store_true", help="keep runtimes in json output")
    return parser


# ---------------------------------------------------------------------------
# output


def _emit_table(rows: list[tuple], header: tuple, fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        for row in rows:
            out.write(" ".join(str(x) for x in row) + "\n")


def _report_row(r: VerificationReport) -> tuple:
    ff = r.first_failure
    return (
        r.verdict.value,
        r.check_id,
        r.order_checked,
        f"{r.range_checked[0]}..{r.range_checked[1]}",
        "" if ff is None else ff.index,
        "" if ff is None else ff.expected,
        "" if ff is None else ff.actual,
        r.runtime_ms,
        r.detail,
    )


def emit_reports(reports: list[VerificationReport], fmt: str, out, *, timings: bool = False) -> None:
    if fmt == "json":
        out.write(reports_to_json(reports, timings=timings) + "\n")
        return
    if fmt == "csv":
        header = ("verdict", "check_id", "order", "range", "fail_index", "expected", "actual",
                  "runtime_ms", "detail")
        _emit_table([_report_row(r) for r in reports], header, "csv", out)
        return
    width = max((len(r.check_id) for r in reports), default=0)
    for r in reports:
        line = f"{r.verdict.value:<7} {r.check_id:<{width}}  n={r.range_checked[0]}..{r.range_checked[1]}"
        if r.first_failure is not None:
            ff = r.first_failure
            line += f"  first failure at {ff.index}: expected {ff.expected}, got {ff.actual}"
        line += f"  ({r.runtime_ms} ms)"
        if r.detail:
            line += f"  [{r.detail}]"
        out.write(line + "\n")
    failed = sum(1 for r in reports if not r.passed)
    out.write(f"{len(reports) - failed}/{len(reports)} passed\n")


# ---------------------------------------------------------------------------
# commands


def cmd_expand(args, out) -> int:
    try:
        if is_registry_name(args.target):
            f = resolve(args.target, args.order)
        else:
            f = eval_text(args.target, args.order)
    except (UnknownSeries, QExprError, QProductError, SeriesError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    if args.format == "json":
        out.write(json.dumps(to_dict(f)) + "\n")
    else:
        _emit_table(list(enumerate(f.coeffs)), ("n", "coeff"), args.format, out)
    return EXIT_OK


def _format_partition(p) -> str:
    if p and isinstance(p[0], tuple):
        lam, mu = p
        return f"{_format_partition(lam)} | {_format_partition(mu)}"
    return "+".join(str(x) for x in p) if p else "(empty)"


def cmd_oracle(args, out) -> int:
    try:
        c = parse_constraint(args.constraint)
    except ConstraintSyntaxError as exc:
        raise UsageError(str(exc)) from None
    if args.list:
        parts = listing(args.n, c)
        total = len(parts)
    else:
        parts = None
        total = count(args.n, c)
    if args.format == "json":
        data = {"constraint": str(c), "n": args.n, "count": total}
        if parts is not None:
            if c.tag is Tag.CUBIC:
                data["partitions"] = [[list(a), list(b)] for a, b in parts]
            else:
                data["partitions"] = [list(p) for p in parts]
        out.write(json.dumps(data) + "\n")
    elif args.format == "csv":
        rows = [(str(c), args.n, total)]
        _emit_table(rows, ("constraint", "n", "count"), "csv", out)
        if parts is not None:
            _emit_table([(_format_partition(p),) for p in parts], ("partition",), "csv", out)
    else:
        out.write(f"{total}\n")
        for p in parts or ():
            out.write(_format_partition(p) + "\n")
    return EXIT_OK


def _group_runners(args) -> dict[str, Callable[[T.Tables], list[VerificationReport]]]:
    N, K = args.order, args.kmax
    return {
        "geq-k-identity": lambda t: [T.check_geq_k_identity(k, N, t) for k in range(1, K + 1)],
        "exact-k-identity": lambda t: [T.check_exact_k_identity(k, N, t) for k in range(1, K + 1)],
        "exact2-recurrence": lambda t: [T.check_exact2_recurrence(N, t)],
        "geq3-recurrence": lambda t: [T.check_geq3_recurrence(N, t)],
        "dee-alternating": lambda t: [T.check_dee_alternating(N, t)],
        "dee1-alternating": lambda t: [T.check_dee1_alternating(N, t)],
        "dee-geq2-alternating": lambda t: [T.check_dee_geq2_alternating(N, t)],
        "de-reg4-relations": lambda t: [T.check_de_reg4_relations(N, t)],
        "mod2-triangular": lambda t: [T.check_mod2_triangular(N, "exact", t),
                                      T.check_mod2_triangular(N, "congruence", t)],
        "mod2-square": lambda t: [T.check_mod2_square(N, "exact", t),
                                  T.check_mod2_square(N, "congruence", t)],
        "mod2-small-cases": lambda t: T.check_mod2_small_cases(t),
        "mod2-iff-triangular": lambda t: [T.check_mod2_iff_triangular(N, t)],
        "mod4-cubic": lambda t: [T.check_mod4_cubic(N, "exact", t),
                                 T.check_mod4_cubic(N, "congruence", t)],
        "mod8-cubic": lambda t: [T.check_mod8_cubic(N, "exact", t),
                                 T.check_mod8_cubic(N, "congruence", t)],
        "step": lambda t: T.intermediate_reports(N, t),
        "classical": lambda t: T.classical_reports(N),
        "oracle": lambda t: T.check_oracles(
            args.oracle_limit, allow_large=args.allow_large_oracle
        ),
    }


def _group_of(check_id: str) -> str:
    for sep in (":", "["):
        check_id = check_id.split(sep)[0]
    return check_id


def select_reports(args) -> list[VerificationReport]:
    if args.oracle_limit > MAX_ORACLE_LIMIT and not args.allow_large_oracle:
        raise UsageError(
            f"--oracle-limit {args.oracle_limit} exceeds {MAX_ORACLE_LIMIT}; "
            "add --allow-large-oracle to override"
        )
    target = args.target
    if target == "all":
        if args.order < 16:
            raise UsageError("verify all needs --order >= 16")
        return T.run_all(
            args.order, args.kmax, oracle_limit=args.oracle_limit,
            allow_large_oracle=args.allow_large_oracle,
        )
    if target == "oracles":
        target = "oracle"
    runners = _group_runners(args)
    group = _group_of(target)
    if group not in runners:
        raise UsageError(
            f"unknown check {args.target!r}; groups: all, oracles, " + ", ".join(runners)
        )
    try:
        reports = runners[group](T.Tables(args.order))
    except T.TheoremError as exc:
        raise UsageError(str(exc)) from None
    if target != group:
        reports = [r for r in reports if r.check_id == target]
        if not reports:
            raise UsageError(f"unknown check id {args.target!r} in group {group!r}")
    return sorted(reports, key=lambda r: T.natural_key(r.check_id))


def cmd_verify(args, out) -> int:
    reports = select_reports(args)
    emit_reports(reports, args.format, out, timings=args.timings)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_identity(args, out) -> int:
    try:
        report = check_identity(args.lhs, args.rhs, args.order)
    except QExprError as exc:
        raise UsageError(str(exc)) from None
    emit_reports([report], args.format, out, timings=args.timings)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"expand": cmd_expand, "oracle": cmd_oracle, "verify": cmd_verify, "identity": cmd_identity}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"qseries-lab {args.command}: error: {exc}\n")
        return EXIT_USAGE


def run_captured(argv: list[str]) -> tuple[int, str]:
    """Run the CLI in-process and return (exit status, stdout text)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
