"""Command-line front end.

Exit codes: 0 success, 1 negative or inconclusive result (including an
exhausted limit), 2 bad invocation or invalid input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from .classify import classify_full, verify_collapse_identity, verify_uncollapsed
from .errors import GeodualError, Inconclusive, LimitExceeded, NotPrime, ParseError, SurfaceError
from .fpgroup import (
    coset_enumeration,
    geodesic_presentation,
    parse_word,
    quotient_coset_table,
    subgroup_presentation,
    triangle_presentation,
)
from .search import search_self_dual
from .smith import abelian_invariants
from .surface import geodesic_dual, is_geodesic_self_dual, read_surface, serialize_surface, stats
from .voltage import materialize_lift, prop_assignment, verify_lift

log = logging.getLogger(__name__)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

REPORT_COLUMNS = (
    "degree",
    "index",
    "subgroup_order",
    "vertices",
    "edges",
    "faces",
    "euler",
    "orientable",
    "orientable_genus",
    "crosscap",
)


class UsageError(Exception):
    pass


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def report_row(d: int, index: int, subgroup_order, st) -> str:
    values = (
        d,
        index,
        subgroup_order,
        st.vertex_count,
        st.edge_count,
        st.face_count,
        st.euler_characteristic,
        st.orientable,
        st.orientable_genus,
        st.crosscap_number,
    )
    return "\t".join(_cell(v) for v in values)


def classification_report(d: int, order_cap: int | None) -> tuple[str, int]:
    """TSV text and row count for ``classify --degree d``."""
    lines = []
    if d >= 10:
        if order_cap is None:
            raise LimitExceeded(f"H_{d} is infinite; pass --order-cap to bound the flag count")
        result = search_self_dual(d, order_cap)
        lines.append(f"# NON-EXHAUSTIVE: surfaces with at most {order_cap} flags only")
        lines.append("\t".join(REPORT_COLUMNS))
        rows = [report_row(d, e.index, None, e.surface_stats) for e in result.entries]
    else:
        result = classify_full(d, order_cap)
        if not result.exhaustive:
            lines.append(f"# NON-EXHAUSTIVE: subgroups of order at most {order_cap} only")
        lines.append("\t".join(REPORT_COLUMNS))
        rows = [report_row(d, e.index, e.order, e.surface_stats) for e in result.entries]
    return "\n".join(lines + rows) + "\n", len(rows)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_classify(args) -> int:
    if args.degree < 3:
        raise UsageError("--degree must be at least 3")
    text, rows = classification_report(args.degree, args.order_cap)
    _emit(text, args.output)
    return EXIT_OK if rows else EXIT_NEGATIVE


def cmd_surface(args) -> int:
    s = read_surface(args.file)
    if args.action == "info":
        st = stats(s)
        degree = "-" if st.uniform_degree is None else st.uniform_degree
        print(
            f"V={st.vertex_count} E={st.edge_count} F={st.face_count} "
            f"chi={st.euler_characteristic} orientable={_cell(st.orientable)} degree={degree}"
        )
        return EXIT_OK
    if args.action == "dual":
        _emit(serialize_surface(geodesic_dual(s)), args.output)
        return EXIT_OK
    ok, phi = is_geodesic_self_dual(s)
    if ok:
        print(f"yes anchor {phi(1)}")
        return EXIT_OK
    print("no")
    return EXIT_NEGATIVE


def _presentation(family: str, d: int):
    if d < 1:
        raise UsageError("degree must be at least 1")
    return triangle_presentation(d) if family == "T" else geodesic_presentation(d)


def cmd_group(args) -> int:
    if args.action == "collapse-check":
        if args.d is None and args.k is None:
            report = verify_collapse_identity()
            sys.stdout.write(report.render())
            return EXIT_OK if report.passed else EXIT_NEGATIVE
        if args.d is None or args.k is None:
            raise UsageError("--d and --k go together")
        try:
            rep = verify_uncollapsed(args.d, args.k, limit=args.limit)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        print(rep)
        if rep.invariants is not None:
            print(f"kernel index {rep.kernel_index} {rep.invariants}")
        return EXIT_OK if rep.distinct else EXIT_NEGATIVE
    if args.family is None or args.degree is None:
        raise UsageError(f"group {args.action} needs FAMILY and DEGREE")
    pres = _presentation(args.family, args.degree)
    if args.action == "order":
        table = coset_enumeration(pres, (), args.limit)
        if not table.complete:
            print("infinite-or-exceeds-limit")
            return EXIT_NEGATIVE
        print(table.coset_count)
        return EXIT_OK
    if args.word:
        try:
            words = [parse_word(w) for w in args.word]
        except ParseError as exc:
            raise UsageError(str(exc)) from None
        table = quotient_coset_table(pres, words, args.limit)
        if not table.complete:
            raise LimitExceeded(table.limit_reason or "enumeration incomplete")
        print(f"index {table.coset_count}")
        pres = subgroup_presentation(pres, table)
    print(abelian_invariants(pres))
    return EXIT_OK


def cmd_lift(args) -> int:
    s = read_surface(args.file)
    va = prop_assignment(s, args.prime)
    if args.mode == "verify":
        rep = verify_lift(va)
        sys.stdout.write(rep.render())
        return EXIT_OK if rep.all_match else EXIT_NEGATIVE
    lifted = materialize_lift(va, args.flag_cap)
    _emit(serialize_surface(lifted), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geodual", description="Geodesic self-dual triangulated surfaces.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify geodesic self-dual degree-d surfaces")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument(
        "--order-cap",
        type=int,
        help="subgroup order bound (d <= 9) or flag count bound (d >= 10); makes the search partial",
    )
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("surface", help="inspect a surface file")
    s.add_argument("action", choices=("info", "dual", "selfdual"))
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_surface)

    g = sub.add_parser("group", help="triangle group computations")
    g.add_argument("action", choices=("order", "abelian", "collapse-check"))
    g.add_argument("family", nargs="?", choices=("T", "H"))
    g.add_argument("degree", nargs="?", type=int)
    g.add_argument("--word", action="append", help="normal subgroup generator, e.g. '(bac)^8' (repeatable)")
    g.add_argument("--limit", type=int, default=100_000, help="largest index accepted")
    g.add_argument("--d", type=int)
    g.add_argument("--k", type=int)
    g.set_defaults(func=cmd_group)

    lf = sub.add_parser("lift", help="corner voltage lift of a surface")
    lf.add_argument("file")
    lf.add_argument("mode", choices=("verify", "materialize"))
    lf.add_argument("--prime", type=int, required=True)
    lf.add_argument("--flag-cap", "--limit", dest="flag_cap", type=int, default=1_000_000)
    lf.add_argument("-o", "--output")
    lf.set_defaults(func=cmd_lift)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SurfaceError as exc:
        print(f"error: {exc.condition}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, NotPrime) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LimitExceeded, Inconclusive) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except GeodualError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
