"""Command-line front end: ``parthom {classify,eval,oracle,selftest}``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .classify import classify, render_verdict, verdict_to_dict
from .core import Multigraph, SymMatrix
from .evaluate import eval_tractable
from .formats import ParseError, format_decimal, format_rational, parse_graph, parse_matrix
from .oracle import OracleGuardError, eval_plain_bruteforce

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_HARD = 3
EXIT_GUARD = 4


def _read(path: str, parser):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return parser(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _value_report(value: Fraction, args: argparse.Namespace) -> str:
    if args.json:
        out = {"value": format_rational(value)}
        if args.decimal is not None:
            out["decimal"] = format_decimal(value, args.decimal)
            out["approximate"] = True
        return json.dumps(out, sort_keys=True)
    text = format_rational(value)
    if args.decimal is not None:
        text += f"\n~ {format_decimal(value, args.decimal)} (approximate, {args.decimal} digits)"
    return text


def _cmd_classify(args, out: TextIO) -> int:
    a: SymMatrix = _read(args.matrix, parse_matrix)
    print(render_verdict(classify(a), as_json=args.json), file=out)
    return EXIT_OK


def _cmd_eval(args, out: TextIO, err: TextIO) -> int:
    a: SymMatrix = _read(args.matrix, parse_matrix)
    g: Multigraph = _read(args.graph, parse_graph)
    verdict = classify(a)
    if not verdict.tractable:
        if args.json:
            print(json.dumps({"error": "hard", **verdict_to_dict(verdict)}, indent=2, sort_keys=True), file=out)
        else:
            print(render_verdict(verdict), file=err)
        return EXIT_HARD
    print(_value_report(eval_tractable(a, verdict.witness, g), args), file=out)
    return EXIT_OK


def _cmd_oracle(args, out: TextIO, err: TextIO) -> int:
    a: SymMatrix = _read(args.matrix, parse_matrix)
    g: Multigraph = _read(args.graph, parse_graph)
    try:
        value = eval_plain_bruteforce(a, g)
    except OracleGuardError as exc:
        print(f"oracle refused: {exc}", file=err)
        return EXIT_GUARD
    print(_value_report(value, args), file=out)
    return EXIT_OK


def _cmd_selftest(args, out: TextIO) -> int:
    from .selftest import run_selftest

    results = run_selftest(None if args.json else lambda line: print(line, file=out, flush=True))
    if args.json:
        rows = [
            {"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
            for r in results
        ]
        print(json.dumps(rows, indent=2), file=out)
    failed = [r.number for r in results if not r.passed]
    if not args.json:
        print("selftest: all criteria passed" if not failed else f"selftest: FAILED criteria {failed}", file=out)
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, metavar="N", help="worker cap (evaluation is single-threaded)")
    values = argparse.ArgumentParser(add_help=False)
    values.add_argument("--decimal", type=int, metavar="DIGITS", help="also print an approximate fixed-point value")

    parser = argparse.ArgumentParser(prog="parthom", description="Exact partition functions Z_A(G) and their complexity.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="decide tractable or #P-hard")
    p.add_argument("matrix")
    p = sub.add_parser("eval", parents=[common, values], help="evaluate Z_A(G) for a tractable A")
    p.add_argument("matrix")
    p.add_argument("graph")
    p = sub.add_parser("oracle", parents=[common, values], help="brute-force Z_A(G) (small inputs)")
    p.add_argument("matrix")
    p.add_argument("graph")
    sub.add_parser("selftest", parents=[common], help="run the acceptance corpus")
    return parser


def run_cli(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:   # argparse reports usage errors itself
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=err)
        return EXIT_PARSE
    if getattr(args, "decimal", None) is not None and args.decimal < 0:
        print("error: --decimal must be nonnegative", file=err)
        return EXIT_PARSE
    try:
        if args.command == "classify":
            return _cmd_classify(args, out)
        if args.command == "eval":
            return _cmd_eval(args, out, err)
        if args.command == "oracle":
            return _cmd_oracle(args, out, err)
        return _cmd_selftest(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
