"""Command-line entry point.

Exit codes: 0 success (or a valid packing), 1 invalid input, 2 a packing
that fails verification.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bounds
from .certificate import (
    CertificateFormatError,
    CertificateVerificationError,
    dumps,
    format_rational,
    parse_rational,
    read_certificate,
)
from .constructions import combine, grid
from .geometry import verify
from .optimizer import SearchConfig, optimize
from .render import svg_text
from .report import ledger_table

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load(path: str, check: bool = True):
    try:
        return read_certificate(path, check=check)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_verify(args) -> int:
    packing = _load(args.file, check=False)
    report = verify(packing)
    print(report.describe())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_grid(args) -> int:
    try:
        packing = grid(args.b)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(dumps(packing), args.output)
    return EXIT_OK


def cmd_combine(args) -> int:
    p1, p2 = _load(args.p1), _load(args.p2)
    try:
        packing = combine(p1, p2, args.a1, args.a2, args.b)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(dumps(packing), args.output)
    return EXIT_OK


def _ledger(args, max_n: int) -> bounds.Ledger:
    witnesses = [_load(path) for path in args.witness]
    params = bounds.PropagateParams(b_cap=args.b_cap)
    return bounds.propagate(max_n, params=params, witnesses=witnesses)


def cmd_ledger(args) -> int:
    if args.max_n < 1:
        raise InputError("--max-n must be >= 1")
    sys.stdout.write(ledger_table(_ledger(args, args.max_n), args.format))
    return EXIT_OK


def cmd_epsilon(args) -> int:
    if args.k < 1:
        raise InputError("--k must be >= 1")
    n = args.k * args.k + 1
    ledger = _ledger(args, n)
    lbd = ledger.lb(n)
    print(f"eps({args.k}) in {bounds.epsilon_interval(ledger, args.k)}")
    print(f"f({n}) >= {format_rational(lbd.value)} via {lbd.derivation}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    try:
        config = SearchConfig(
            n=args.n,
            restarts=args.restarts,
            seed=args.seed,
            denom_bound=args.denom_bound,
            time_budget=args.time_budget,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    best, packing = optimize(config)
    print(
        f"objective {best.objective:.12f}; exact total {format_rational(packing.total)} "
        f"with {packing.n} squares",
        file=sys.stderr,
    )
    _emit(dumps(packing), args.output)
    return EXIT_OK


def cmd_theorem1(args) -> int:
    try:
        result = bounds.theorem1_implication(args.k, args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(f"conditional: {result}")
    print(f"  target index {result.target_index} = {args.n}^2 + 1")
    print(
        f"  {args.k} f({args.k * args.k + 1}) <= {result.lemma_constant} - {result.known_term}"
        f" = {result.bound_times_k}"
    )
    return EXIT_OK


def cmd_theorem2(args) -> int:
    try:
        alpha = parse_rational(args.alpha)
        chain = bounds.theorem2_chain(args.N, alpha, args.a, args.k)
    except (ValueError, CertificateFormatError) as exc:
        raise InputError(str(exc)) from None
    print(f"conditional on f({args.N}^2+1) = {args.N} + {format_rational(alpha)}:")
    print(f"  eps({args.k}) >= {format_rational(chain.eps_lower)}")
    print(
        f"  lemma with a1={chain.a}, a2={chain.N}, b={chain.b}, n1={chain.n1}, n2={chain.n2}"
        f" -> target {chain.target_index}"
    )
    print(
        f"  {format_rational(chain.lhs_lower)} <= {format_rational(chain.rhs_constant)}"
        f" + {chain.rhs_eps_coeff} eps({args.k})"
    )
    if not chain.halasz_in_range:
        print(f"  note: uses the Halasz bound with c={chain.b} > k={chain.a}")
    return EXIT_OK


def cmd_render(args) -> int:
    _emit(svg_text(_load(args.file)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="squarepack", description="Exact tools for packing squares in a unit square.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="check a certificate exactly")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="write the b x b grid packing")
    p.add_argument("b", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("combine", help="substitute two packings into corner blocks of a grid")
    p.add_argument("p1")
    p.add_argument("p2")
    p.add_argument("--a1", type=int, required=True)
    p.add_argument("--a2", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_combine)

    for name, func, help_text in (
        ("ledger", cmd_ledger, "propagate bounds on f(n) up to --max-n"),
        ("epsilon", cmd_epsilon, "bounds on eps(k) = f(k^2+1) - k"),
    ):
        p = sub.add_parser(name, help=help_text)
        if name == "ledger":
            p.add_argument("--max-n", type=int, required=True)
            p.add_argument("--format", choices=("table", "json"), default="table")
        else:
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--b-cap", type=int, default=32)
        p.add_argument("--witness", nargs="*", default=[], metavar="FILE")
        p.set_defaults(func=func)

    p = sub.add_parser("optimize", help="search for a packing of n squares")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--denom-bound", type=int, default=10**6)
    p.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("theorem1", help="f(k^2+1) <= k, assuming f(n^2+1) = n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("theorem2", help="lower bound on eps(k), assuming f(N^2+1) = N + alpha")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", required=True, metavar="P/Q")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("render", help="draw a certificate as SVG")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InputError, CertificateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificateVerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
