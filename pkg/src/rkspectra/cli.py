"""Command-line entry point.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 internal
inconsistency, 3 size or enumeration budget exceeded, 4 unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import NoReturn, Sequence

from . import catalog, oracle, serialize
from .poset import pareto_product

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INTERNAL = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4

DEFAULT_MAX_NODES = 100_000


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


class _InputError(Exception):
    pass


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load(path: str):
    try:
        return serialize.loads(_read(path))
    except serialize.DocumentError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def cmd_build(args: argparse.Namespace) -> int:
    sig = catalog.TheorySignature(args.k, args.s)
    if sig.node_count > args.max_nodes:
        print(
            f"signature {sig} has {sig.node_count} nodes, above --max-nodes {args.max_nodes}",
            file=sys.stderr,
        )
        return EXIT_BUDGET
    _write(args.output, serialize.dumps(catalog.build_theory(sig), sig))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = catalog.decomposition_report((args.k, args.s))
    print(f"signature {report.signature}")
    print(catalog.format_identity(report, expand=False))
    print(catalog.format_identity(report))
    print("terms (t, m): multiplicity x limit models per type = value")
    for term in report.nonzero_terms():
        print(f"  ({term.t}, {term.m}): {term.multiplicity} x {term.per_type} = {term.value}")
    if not report.balanced:
        print("UNBALANCED", file=sys.stderr)
        return EXIT_INTERNAL
    print("balanced")
    return EXIT_OK


def _colex(coord: catalog.NodeCoord) -> tuple[int, ...]:
    return tuple(reversed(coord.a + coord.b))


def cmd_oracle(args: argparse.Namespace) -> int:
    sig = catalog.TheorySignature(args.k, args.s)
    try:
        report = oracle.oracle_counts(sig, args.max_enumeration, check=False)
    except oracle.EnumerationBudgetExceeded as exc:
        print(f"{exc}; raise --max-enumeration or use 'verify'", file=sys.stderr)
        return EXIT_BUDGET
    print(f"signature {sig}")
    print(f"total {report.total}")
    print(f"prime {report.prime_count}")
    print(f"limit {report.limit_count}")
    print("node\tlimit\tclosed-form")
    for coord in sorted(report.per_node, key=_colex):
        want = catalog.il_closed_form(coord.t, coord.m)
        print(f"{coord.ident}\t{report.per_node[coord]}\t{want}")
    problems = oracle.mismatches(report)
    for line in problems:
        print(line, file=sys.stderr)
    print("mismatch" if problems else "match")
    return EXIT_INTERNAL if problems else EXIT_OK


def cmd_identify(args: argparse.Namespace) -> int:
    p, _ = _load(args.input)
    sig = catalog.identify(p)
    if sig is None:
        print("not canonical")
        return EXIT_NEGATIVE
    print(sig)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    p, _ = _load(args.input)
    _write(args.output, serialize.to_dot(p))
    return EXIT_OK


def cmd_validate_count(args: argparse.Namespace) -> int:
    text = args.n.strip()
    if not text.isdigit() or int(text) < 1:
        print(f"not a positive decimal integer: {args.n!r}", file=sys.stderr)
        return EXIT_PARSE
    sig = catalog.validate_count(int(text))
    if sig is None:
        print("not a quite o-minimal Ehrenfeucht spectrum value")
        return EXIT_NEGATIVE
    print(sig)
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    if len(args.input) != 2:
        print("compose needs exactly two --input documents", file=sys.stderr)
        return EXIT_PARSE
    (p, sig_p), (q, sig_q) = (_load(path) for path in args.input)
    sig = sig_p + sig_q if sig_p is not None and sig_q is not None else None
    _write(args.output, serialize.dumps(pareto_product(p, q), sig))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rkspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def signature_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--k", type=_nonneg, required=True, help="number of T1 components")
        p.add_argument("--s", type=_nonneg, required=True, help="number of T2 components")

    p = sub.add_parser("build", help="write the canonical lattice for (k, s) as JSON")
    signature_flags(p)
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--max-nodes", type=_nonneg, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check the decomposition formula for (k, s)")
    signature_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="count models of (k, s) by brute-force enumeration")
    signature_flags(p)
    p.add_argument("--max-enumeration", type=_nonneg, default=oracle.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("identify", help="find the signature of a preorder document")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("render", help="emit the Hasse diagram of a document as DOT")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("validate-count", help="is n = 3^k * 6^s for some k, s?")
    p.add_argument("n")
    p.set_defaults(func=cmd_validate_count)

    p = sub.add_parser("compose", help="Pareto product of two documents")
    p.add_argument("--input", action="append", required=True, help="give twice")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_compose)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
