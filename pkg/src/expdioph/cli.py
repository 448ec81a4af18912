"""Command-line front end.

Exit codes: 0 on success, 1 when a computation fails (a partial
certificate is still written if ``--json`` was given), 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from expdioph import __version__
from expdioph.arith.cfrac import expand_source
from expdioph.arith.expr import parse_expr
from expdioph.arith.real import DEFAULT_PREC, MAX_PREC, Precision
from expdioph.certificate import Certificate, load, verify
from expdioph.errors import ExpDiophError, ProofIncomplete
from expdioph.pipeline.ledger import encode

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SPEC_KEYS = ("P", "Q", "U0", "U1", "primes", "coefficients", "t", "epsilon")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _expr(text: str):
    try:
        return parse_expr(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def read_spec_file(path: str | Path):
    """Parse a flat ``key = value`` problem file into a :class:`ProblemSpec`.

    Lists are comma separated; ``epsilon`` is optional (default 1/2).
    """
    from expdioph.recurrence import BinaryRecurrence, ProblemSpec

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keep key case
    try:
        text = Path(path).read_text(encoding="utf-8")
        parser.read_string("[spec]\n" + text)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read spec file {path}: {exc}") from None
    raw = dict(parser["spec"])
    unknown = set(raw) - set(SPEC_KEYS)
    if unknown:
        raise UsageError(f"unknown keys in spec file: {sorted(unknown)}")
    missing = [k for k in SPEC_KEYS[:-1] if k not in raw]
    if missing:
        raise UsageError(f"missing keys in spec file: {missing}")
    try:
        ints = {k: int(raw[k]) for k in ("P", "Q", "U0", "U1", "t")}
        primes = tuple(int(x) for x in raw["primes"].split(","))
        coefficients = tuple(int(x) for x in raw["coefficients"].split(","))
        eps = Fraction(raw.get("epsilon", "1/2"))
        rec = BinaryRecurrence(ints["P"], ints["Q"], ints["U0"], ints["U1"])
        return ProblemSpec(rec, primes, coefficients, ints["t"], eps)
    except (ValueError, ExpDiophError) as exc:
        raise UsageError(f"bad spec file {path}: {exc}") from None


# -- subcommands ----------------------------------------------------------------
# each returns (exit code, certificate)


def cmd_solve_fib23(args, precision):
    from expdioph.pipeline.theorem2 import SPEC, theorem2_solve

    try:
        res = theorem2_solve(precision, threads=args.threads, workers=args.workers)
    except ProofIncomplete as exc:
        print(f"proof incomplete: {exc}", file=sys.stderr)
        return EXIT_FAIL, Certificate.build("solve-fib23", precision, exc.ledger, spec=SPEC, error=str(exc))
    for sol in res.solutions:
        print(sol)
    cert = Certificate.build("solve-fib23", precision, res.ledger, spec=SPEC, solutions=res.solutions,
                             timings=res.timings if args.timings else None)
    return EXIT_OK, cert


def cmd_bound_chain(args, precision):
    from expdioph.pipeline.theorem1 import theorem1_constant

    spec = read_spec_file(args.spec_file)
    t0 = time.perf_counter()
    C, ledger = theorem1_constant(spec, precision)
    digits = len(str(C))
    print(f"C = {C}" if digits <= 60 else f"C has {digits} digits, C < 10^{digits}")
    timings = {"bound_chain": time.perf_counter() - t0} if args.timings else None
    return EXIT_OK, Certificate.build("bound-chain", precision, ledger, spec=spec, result={"C": str(C)}, timings=timings)


def cmd_reduce(args, precision):
    from expdioph.reduction import ReductionInstance, baker_davenport

    inst = ReductionInstance(_expr(args.gamma), _expr(args.mu), _expr(args.A), _expr(args.B), args.M)
    out = baker_davenport(inst, precision, retries=args.retries, convergent_index=args.k)
    print(f"status: {out.status.value}")
    print(f"k = {out.k}, q = {out.q}")
    mid, rad = out.epsilon.to_decimal(20)
    print(f"eps = {mid} +- {rad}")
    result = {"status": out.status.value, "k": str(out.k), "q": str(out.q), "eps": encode(out.epsilon),
              "gamma": str(inst.gamma), "mu": str(inst.mu), "A": args.A, "B": args.B, "M": str(args.M)}
    if not out.ok:
        return EXIT_FAIL, Certificate.build("reduce", precision, result=result, error="eps is not positive")
    print(f"m_bound = {out.m_bound}  (no solution with m >= {out.m_bound})")
    result.update(m_bound=str(out.m_bound), log_ratio=encode(out.log_ratio))
    return EXIT_OK, Certificate.build("reduce", precision, result=result)


def cmd_matveev(args, precision):
    from expdioph.arith.real import escalate
    from expdioph.matveev import LinearFormSpec, lower_bound_exponent, matveev_coefficient

    if len(args.A) != args.t:
        raise UsageError(f"--A needs exactly t = {args.t} values")
    lf = LinearFormSpec(args.t, args.D, tuple(args.A), args.B)
    coef = escalate(lambda prec: matveev_coefficient(args.t, args.D, args.A, prec), precision)
    E = escalate(lambda prec: lower_bound_exponent(lf, prec), precision)
    print(f"coefficient = {coef.to_decimal(12)[0]}")
    print(f"log|Lambda| > -{E.to_decimal(12)[0]}")
    result = {"t": args.t, "D": args.D, "A": [str(a) for a in args.A], "B": str(args.B),
              "coefficient": encode(coef), "exponent": encode(E)}
    return EXIT_OK, Certificate.build("matveev", precision, result=result)


def cmd_cfrac(args, precision):
    if args.k < 0:
        raise UsageError("k must be non-negative")
    cf = expand_source(_expr(args.expr), args.k, precision)
    if len(cf) <= args.k:
        print(f"note: the expansion terminates after {len(cf)} terms", file=sys.stderr)
    convs = cf.convergents[: args.k + 1]
    print(", ".join(_fmt_fraction(c) for c in convs))
    result = {"expr": args.expr, "quotients": [str(a) for a in cf.partial_quotients[: args.k + 1]],
              "convergents": [str(c) for c in convs]}
    return EXIT_OK, Certificate.build("cfrac", precision, result=result)


def cmd_scan_valuation(args, precision):
    from expdioph.search import scan_details

    if args.n1_min > args.n1_max or args.gap_max < 0 or args.z1_max < 0:
        raise UsageError("empty or negative scan ranges")
    t0 = time.perf_counter()
    res = scan_details(range(args.n1_min, args.n1_max + 1), args.gap_max, args.z1_max, args.p,
                       base=args.base, threads=args.threads, backend=args.backend)
    if res.max_valuation is None:
        print("no cells scanned")
        return EXIT_FAIL, Certificate.build("scan-valuation", precision, error="no cells scanned")
    print(f"max valuation = {res.max_valuation} at (n1, n2, z1) = {res.witness}  [{res.cells} cells, {res.backend}]")
    result = {"p": args.p, "base": args.base, "n1": [args.n1_min, args.n1_max], "gap_max": args.gap_max,
              "z1_max": args.z1_max, "max_valuation": res.max_valuation, "witness": list(res.witness),
              "cells": res.cells, "exact_zeros": [list(z) for z in res.exact_zeros]}
    timings = {"scan": time.perf_counter() - t0} if args.timings else None
    return EXIT_OK, Certificate.build("scan-valuation", precision, result=result, timings=timings)


def cmd_enumerate(args, precision):
    from expdioph.recurrence import FIBONACCI, ProblemSpec
    from expdioph.search import enumerate_box

    if args.N < 1:
        raise UsageError("N must be at least 1")
    sols = enumerate_box(args.N)
    for sol in sols:
        print(sol)
    spec = ProblemSpec(FIBONACCI, (2, 3), (1, 1), 2)
    return EXIT_OK, Certificate.build("enumerate", precision, spec=spec, solutions=sols, result={"N": args.N})


def cmd_verify(args, precision):
    import jsonschema

    try:
        cert = load(args.certificate)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"malformed certificate: {exc.message}") from None
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load certificate: {exc}") from None
    problems = verify(cert, None if args.precision_bits is None else precision, replay=not args.no_replay)
    for p in problems:
        print(f"FAIL {p}")
    print("verified" if not problems else f"{len(problems)} problem(s)")
    return (EXIT_FAIL if problems else EXIT_OK), None


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a JSON certificate here")
    common.add_argument("--precision-bits", type=_positive_int, metavar="N",
                        help=f"precision ceiling in bits (default {MAX_PREC})")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                        help="threads for the valuation scan (default: all cores)")
    common.add_argument("--timings", action="store_true", help="record wall-clock per phase in the certificate")

    parser = argparse.ArgumentParser(prog="expdioph", description="Certified solver for F_n1 + F_n2 = 2^z1 + 3^z2 and relatives.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-fib23", parents=[common], help="solve F_n1 + F_n2 = 2^z1 + 3^z2 completely")
    p.add_argument("--workers", type=_positive_int, default=1, help="processes for the batch reductions")
    p.set_defaults(func=cmd_solve_fib23)

    p = sub.add_parser("bound-chain", parents=[common], help="effective bound C for a problem file")
    p.add_argument("spec_file")
    p.set_defaults(func=cmd_bound_chain)

    p = sub.add_parser("reduce", parents=[common], help="one Baker-Davenport reduction")
    p.add_argument("--gamma", required=True, help="irrational gamma, e.g. 'log(3)/log((1+sqrt(5))/2)'")
    p.add_argument("--mu", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--k", type=int, default=None, help="pin the convergent index")
    p.add_argument("--retries", type=int, default=50)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("matveev", parents=[common], help="Matveev lower bound for a linear form")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--D", type=_positive_int, required=True)
    p.add_argument("--A", type=_fraction, nargs="+", required=True)
    p.add_argument("--B", type=_fraction, required=True)
    p.set_defaults(func=cmd_matveev)

    p = sub.add_parser("cfrac", parents=[common], help="convergents p_0/q_0 .. p_k/q_k of an expression")
    p.add_argument("expr")
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_cfrac)

    p = sub.add_parser("scan-valuation", parents=[common], help="max nu_p(F_n1 + F_n2 - base^z1) over a box")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--n1-min", type=int, required=True)
    p.add_argument("--n1-max", type=int, required=True)
    p.add_argument("--gap-max", type=int, required=True)
    p.add_argument("--z1-max", type=int, required=True)
    p.add_argument("--backend", choices=["cython", "python"], default=None)
    p.set_defaults(func=cmd_scan_valuation)

    p = sub.add_parser("enumerate", parents=[common], help="all solutions with n1 <= N")
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate offline")
    p.add_argument("certificate")
    p.add_argument("--no-replay", action="store_true", help="only check structure and solutions")
    p.set_defaults(func=cmd_verify)
    return parser


def _precision(bits: int | None) -> Precision:
    if bits is None:
        return Precision()
    if bits < 16:
        raise UsageError("--precision-bits must be at least 16")
    return Precision(min(DEFAULT_PREC, bits), bits)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        precision = _precision(args.precision_bits)
        code, cert = args.func(args, precision)
    except UsageError as exc:
        print(f"expdioph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExpDiophError as exc:
        print(f"expdioph: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_FAIL
        cert = Certificate.build(args.command, _safe_precision(args), getattr(exc, "ledger", None),
                                 error=f"{type(exc).__name__}: {exc}")
    if cert is not None and args.json:
        cert.write(args.json)
    return code


def _safe_precision(args) -> Precision:
    try:
        return _precision(args.precision_bits)
    except UsageError:
        return Precision()


if __name__ == "__main__":
    sys.exit(main())
