"""Command-line front end: diagram listings, expansions and verification runs.

Everything is emitted in a machine-readable form (JSON by default, CSV or a
pretty text rendering on request) with canonical ordering, so repeated runs
with the same flags are byte-identical.  Exit codes: 0 on success, 1 when a
verification run reports a failure, 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .algebra import Expansion, QPolynomial
from .diagrams import GroundSet, classify, crossing_stats, enumerate_diagrams, enumerate_nonlinking
from .errors import QwickError
from .verify import CHECKS, run_check
from .wick import (
    free_moment_expansion,
    free_normal_to_wick,
    free_product_expansion,
    free_product_expectation,
    free_wick_to_normal,
    moment_expansion,
    normal_to_wick,
    product_expansion,
    product_expectation,
    wick_to_normal,
)

FORMATS = ("json", "csv", "pretty")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _block_list(text: str) -> tuple[int, ...]:
    try:
        blocks = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"blocks must be comma-separated integers: {text!r}")
    if not blocks or any(b <= 0 for b in blocks):
        raise argparse.ArgumentTypeError(f"block sizes must be positive: {text!r}")
    return blocks


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwick",
        description="Exact diagram-sum calculus for q-Gaussian variables with a "
        "brute-force operator oracle.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--cap", type=int, default=None, help="enumeration size cap override")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "diagrams", parents=[common], help="list diagrams with crossing statistics"
    )
    p.add_argument("--n", type=int, default=None, help="ground size")
    p.add_argument("--blocks", type=_block_list, default=None, help="block sizes a,b,c")
    p.set_defaults(func=cmd_diagrams)

    p = sub.add_parser("moments", parents=[common], help="joint moment expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--free", action="store_true", help="restrict to the q=0 formula")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser(
        "wick", parents=[common], help="convert between Wick and plain products"
    )
    p.add_argument("direction", choices=("to-normal", "to-wick"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--free", action="store_true")
    p.set_defaults(func=cmd_wick)

    p = sub.add_parser(
        "product", parents=[common], help="products of Wick products over blocks"
    )
    p.add_argument("--blocks", type=_block_list, required=True)
    p.add_argument("--free", action="store_true")
    p.add_argument(
        "--expectation", action="store_true", help="emit the expectation instead"
    )
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("check", choices=sorted(CHECKS))
    p.add_argument("--n", type=int, default=None, help="maximum instance size")
    p.add_argument("--blocks", type=_block_list, default=None)
    p.add_argument("--q", type=_rational, default=None, help="rational as num/den")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def _emit_csv(rows, fieldnames) -> None:
    writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def _expansion_rows(expansion: Expansion) -> list[dict]:
    rows = []
    for (cov, word), poly in expansion.sorted_terms():
        rows.append(
            {
                "cov": ";".join(f"{i}-{j}" for i, j in cov.factors),
                "word": " ".join(str(h) for h in word.indices),
                "kind": word.kind,
                "poly": poly.pretty(),
            }
        )
    return rows


def _emit_expansion(expansion: Expansion, meta: dict, fmt: str) -> None:
    if fmt == "json":
        _emit_json({**meta, "terms": expansion.to_json()})
    elif fmt == "csv":
        _emit_csv(_expansion_rows(expansion), ("cov", "word", "kind", "poly"))
    else:
        print(expansion.pretty())


def cmd_diagrams(args) -> int:
    if args.blocks is not None:
        ground = GroundSet(sum(args.blocks), args.blocks)
        stream = enumerate_nonlinking(ground, cap=args.cap)
    elif args.n is not None:
        ground = GroundSet(args.n)
        stream = enumerate_diagrams(ground, cap=args.cap)
    else:
        raise QwickError("diagrams needs --n or --blocks")

    records = []
    summary = {
        "total": 0,
        "complete": 0,
        "complete_noncrossing": 0,
        "noncrossing": 0,
        "strongly_noncrossing": 0,
        "gap_free": 0,
    }
    crossing_poly = QPolynomial.zero()
    for diagram in stream:
        stats = crossing_stats(diagram)
        flags = classify(diagram)
        summary["total"] += 1
        if diagram.is_complete:
            summary["complete"] += 1
            crossing_poly = crossing_poly + QPolynomial.q_power(stats.c)
            if flags.noncrossing:
                summary["complete_noncrossing"] += 1
        summary["noncrossing"] += flags.noncrossing
        summary["strongly_noncrossing"] += flags.strongly_noncrossing
        summary["gap_free"] += flags.gap_free
        records.append(
            {
                "pairs": [list(p) for p in diagram.pairs],
                "singletons": list(diagram.singletons),
                "c": stats.c,
                "d": stats.d,
                "tc": stats.tc,
                "g": stats.g,
                "a": stats.a,
                "noncrossing": flags.noncrossing,
                "strongly_noncrossing": flags.strongly_noncrossing,
                "gap_free": flags.gap_free,
            }
        )

    if args.format == "json":
        _emit_json(
            {
                "size": ground.size,
                "blocks": list(ground.blocks) if ground.blocks else None,
                "summary": summary,
                "complete_crossing_polynomial": {
                    "coeffs": crossing_poly.to_json(),
                    "pretty": crossing_poly.pretty(),
                },
                "diagrams": records,
            }
        )
    elif args.format == "csv":
        rows = [
            {
                **rec,
                "pairs": ";".join(f"{i}-{j}" for i, j in rec["pairs"]),
                "singletons": " ".join(str(s) for s in rec["singletons"]),
            }
            for rec in records
        ]
        _emit_csv(
            rows,
            (
                "pairs",
                "singletons",
                "c",
                "d",
                "tc",
                "g",
                "a",
                "noncrossing",
                "strongly_noncrossing",
                "gap_free",
            ),
        )
    else:
        print(
            "total={total} complete={complete} complete_noncrossing={complete_noncrossing} "
            "noncrossing={noncrossing} strongly_noncrossing={strongly_noncrossing} "
            "gap_free={gap_free}".format(**summary)
        )
        print(f"sum of q^c over complete diagrams: {crossing_poly.pretty()}")
        for rec in records:
            pairs = "".join(f"({i},{j})" for i, j in rec["pairs"]) or "-"
            singles = ",".join(str(s) for s in rec["singletons"]) or "-"
            print(
                f"pairs={pairs} singletons={singles} c={rec['c']} d={rec['d']} "
                f"tc={rec['tc']} g={rec['g']} a={rec['a']}"
            )
    return 0


def cmd_moments(args) -> int:
    builder = free_moment_expansion if args.free else moment_expansion
    expansion = builder(args.n, cap=args.cap)
    _emit_expansion(expansion, {"n": args.n, "free": args.free}, args.format)
    return 0


def cmd_wick(args) -> int:
    if args.direction == "to-normal":
        builder = free_wick_to_normal if args.free else wick_to_normal
    else:
        builder = free_normal_to_wick if args.free else normal_to_wick
    expansion = builder(args.n, cap=args.cap)
    _emit_expansion(
        expansion,
        {"direction": args.direction, "n": args.n, "free": args.free},
        args.format,
    )
    return 0


def cmd_product(args) -> int:
    if args.expectation:
        builder = free_product_expectation if args.free else product_expectation
    else:
        builder = free_product_expansion if args.free else product_expansion
    expansion = builder(args.blocks, cap=args.cap)
    ground = GroundSet(sum(args.blocks), args.blocks)
    meta = {
        "blocks": list(args.blocks),
        "expectation": args.expectation,
        "free": args.free,
        # position p (1-based) carries the lexicographic label labels[p-1]
        "labels": [list(label) for label in ground.lex_labels()],
    }
    _emit_expansion(expansion, meta, args.format)
    return 0


def cmd_verify(args) -> int:
    reports = run_check(
        args.check,
        n=args.n,
        blocks=args.blocks,
        q=args.q,
        dim=args.dim,
        level=args.level,
        seed=args.seed,
        cap=args.cap,
    )
    failures = sum(1 for r in reports if not r.passed)
    if args.format == "json":
        _emit_json(
            {
                "check": args.check,
                "reports": [r.to_json() for r in reports],
                "failures": failures,
            }
        )
    elif args.format == "csv":
        rows = [
            {
                "check": r.check,
                "instance": json.dumps(r.instance, sort_keys=True),
                "status": r.status,
            }
            for r in reports
        ]
        _emit_csv(rows, ("check", "instance", "status"))
    else:
        for r in reports:
            print(f"{r.status.upper():4} {r.check} {json.dumps(r.instance, sort_keys=True)}")
        print(f"{len(reports) - failures}/{len(reports)} instances passed")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QwickError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
