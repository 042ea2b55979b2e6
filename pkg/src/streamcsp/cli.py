"""Command-line surface.

Subcommands:

    estimate  single-pass value estimate (exact or sketch backend)
    oracle    exhaustive exact optimum for small n
    round     construct and evaluate a rounded assignment
    gen       generate hard YES/NO instances or the XOR->OR image
    verify    run the exact inequality suite against the oracle
    report    batch table + figures for one or more instance files

Exit codes: 0 ok, 1 parse error, 2 configuration error, 3 verification
failure.  Input path '-' reads standard input.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .estimators import dispatch
from .formula import ClauseKind, ParseError, parse, stats
from .oracle import exact_val, val_of

PARSE_ERROR, CONFIG_ERROR, VERIFY_ERROR = 1, 2, 3
DEFAULT_SEED = 0x5EED


def _read_formula(path: str):
    if path == "-":
        return parse(sys.stdin)
    try:
        with open(path) as fh:
            return parse(fh)
    except OSError as e:
        raise ConfigError(str(e)) from None


class ConfigError(ValueError):
    pass


def cmd_estimate(args) -> int:
    if not 0.0 < args.eps < 0.5:
        raise ConfigError("--eps must lie in (0, 0.5)")
    if args.t < 1 or args.t % 2 == 0:
        raise ConfigError("--t must be an odd positive integer")
    formula = _read_formula(args.input)
    est = dispatch(formula, epsilon=args.eps, backend=args.backend,
                   seed=args.seed, t=args.t, k_max=args.k_max)
    print(est.to_kv())
    if est.regime == "outside_proven_regime":
        print("regime=outside_proven_regime")
    if args.report_memory:
        print("memory_cells=%d" % est.digest.get("memory_cells", 0))
    return 0


def cmd_oracle(args) -> int:
    formula = _read_formula(args.input)
    try:
        res = exact_val(formula, n_limit=args.limit)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    print("val=%d argmax=%s" % (res.val, "".join(str(int(b)) for b in res.argmax)))
    return 0


def cmd_round(args) -> int:
    from .bias import BiasAccumulator
    from .rounding import (greedy_bias_assignment, make_plan_and, make_plan_ksat,
                           make_plan_or, sample_and)

    formula = _read_formula(args.input)
    kinds = {c.kind for c in formula.clauses}
    st = stats(formula)
    if kinds and kinds <= {ClauseKind.AND2}:
        acc = BiasAccumulator(mode="exact", k_max=2)
        acc.ingest_formula(formula)
        if acc.total_bias() > formula.m / 3.0 or args.scheme == "greedy":
            assignment = greedy_bias_assignment(formula)
            scheme = "greedy"
        else:
            assignment = sample_and(make_plan_and(formula), formula.n, args.seed)
            scheme = "and"
    elif kinds <= {ClauseKind.UNIT, ClauseKind.OR}:
        if st.max_arity <= 2:
            plan = make_plan_or(formula)
            scheme = "or"
        else:
            plan = make_plan_ksat(formula, k_max=args.k_max)
            scheme = "ksat"
        assignment = sample_and(plan, formula.n, args.seed)
    else:
        assignment = greedy_bias_assignment(formula)
        scheme = "greedy"
    value = val_of(formula, assignment.bits)
    print("scheme=%s assignment=%s value=%d" % (scheme, assignment.to_string(), value))
    return 0


def cmd_gen(args) -> int:
    from .gapgen import DbhpParams, gen_gap_instance, write_instance, xor_to_or

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    try:
        if args.reduction == "xor2or":
            if args.input is None:
                raise ConfigError("--reduction xor2or requires an input XOR formula (--input)")
            formula = _read_formula(args.input)
            from .formula import serialize

            out.write(serialize(xor_to_or(formula)))
            return 0
        if args.n is None:
            raise ConfigError("--n is required for DBHP reductions")
        try:
            params = DbhpParams(n=args.n, beta=args.beta, T=args.t, seed=args.seed)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        inst = gen_gap_instance(params, args.case.upper(), args.reduction)
        write_instance(inst, out)
        return 0
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_verify(args) -> int:
    from .verify import verify_formula

    formula = _read_formula(args.input)
    try:
        results = verify_formula(formula, n_limit=args.limit)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    failed = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        suffix = (" (%s)" % r.detail) if r.detail and not r.ok else ""
        print("%s: %s%s" % (r.name, status, suffix))
        failed += 0 if r.ok else 1
    print("checks=%d failed=%d" % (len(results), failed))
    return 0 if failed == 0 else VERIFY_ERROR


def cmd_report(args) -> int:
    from .report import build_record, write_report

    if not 0.0 < args.eps < 0.5:
        raise ConfigError("--eps must lie in (0, 0.5)")
    records = []
    for path in args.inputs:
        formula = _read_formula(path)
        records.append(build_record(path, formula, backend=args.backend,
                                    epsilon=args.eps, seed=args.seed,
                                    oracle_limit=args.limit))
    for p in write_report(records, args.outdir):
        print("wrote %s" % p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="streamcsp",
                                 description="streaming Max-CSP estimation toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="instance file or '-' for stdin")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--k-max", dest="k_max", type=int, default=63)

    p = sub.add_parser("estimate", help="single-pass value estimate")
    common(p)
    p.add_argument("--backend", choices=["exact", "sketch"], default="exact")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--t", type=int, default=1, help="odd confidence-amplification factor")
    p.add_argument("--report-memory", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help="exhaustive exact optimum")
    common(p)
    p.add_argument("--limit", type=int, default=24)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("round", help="rounded assignment and its value")
    common(p)
    p.add_argument("--scheme", choices=["auto", "greedy"], default="auto")
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("gen", help="generate gap instances")
    p.add_argument("--reduction", choices=["eand", "or", "xor2or"], required=True)
    p.add_argument("--case", choices=["yes", "no"], default="yes")
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--t", type=int, default=20, help="graph rounds T")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--input", help="input XOR formula for xor2or")
    p.add_argument("--out", default="-", help="output file or '-' for stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="exact inequality suite")
    common(p)
    p.add_argument("--limit", type=int, default=24)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="batch table + figures")
    p.add_argument("inputs", nargs="+", help="instance files")
    p.add_argument("--outdir", required=True)
    p.add_argument("--backend", choices=["exact", "sketch"], default="exact")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--limit", type=int, default=20, help="oracle size cutoff")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return PARSE_ERROR
    except ConfigError as e:
        print("config error: %s" % e, file=sys.stderr)
        return CONFIG_ERROR
    except ValueError as e:
        print("config error: %s" % e, file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
