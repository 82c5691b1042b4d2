"""Command-line front end.

Exit status: 0 all checks pass, 1 a check fails, 2 inconclusive, 3 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .chains import audit_counting, window_condition
from .embedding import find_in_family
from .expr import ExprSyntaxError, eval_expr, format_expr, is_base_only, parse_expr
from .extremal import (
    Budget,
    check_level_witness,
    e_composition_bound,
    e_lower_scan,
    e_upper_witness,
    la_exact,
    old_bound,
    upper_bound_theorem4,
    verify_main_theorem,
)
from .family import FamilyError, format_set, load_family
from .poset import PosetError, b_value, longest_chain
from .workers import default_jobs

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _half(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number like 2 or 3/2, got {text}") from None
    if value < 0 or (2 * value).denominator != 1:
        raise argparse.ArgumentTypeError(f"m must be a nonnegative multiple of 1/2, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", type=Path, help="write key=value records to this file")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $DOUBLECHAIN_JOBS or 1)")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=_nonneg, default=2_000_000,
                        help="node limit for the exact search")
    budget.add_argument("--time-limit", type=float, default=None, help="seconds")

    parser = _Parser(prog="doublechain", description="Double-chain tools for forbidden subposets.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="size, longest chain, b, e and bounds")
    p.add_argument("expr")
    p.add_argument("--n", type=_nonneg, help="ground-set size for the bounds (default b+1)")

    p = sub.add_parser("la", parents=[common, budget], help="exact La(n, P)")
    p.add_argument("expr")
    p.add_argument("--n", type=_nonneg, required=True)

    p = sub.add_parser("verify", parents=[common, budget], help="check La(n,P) = Sigma(n,b(P))")
    p.add_argument("expr")
    p.add_argument("--n", type=_nonneg, required=True)

    p = sub.add_parser("audit-double-chains", parents=[common],
                       help="double-chain containment counts against the closed form")
    p.add_argument("--n", type=_nonneg, required=True)

    p = sub.add_parser("window-check", parents=[common],
                       help="every (2m+1)-subset of the infinite double chain contains P")
    p.add_argument("expr")
    p.add_argument("--m", type=_half, help="default b(P)")
    p.add_argument("--full", action="store_true", help="enumerate all configurations")
    p.add_argument("--max-configs", type=_nonneg, default=2_000_000)

    p = sub.add_parser("e-scan", parents=[common], help="level-family evidence for e(P)")
    p.add_argument("expr")
    p.add_argument("--m", type=_nonneg, help="levels to scan (default: composition value of e)")
    p.add_argument("--n-max", type=_nonneg)

    p = sub.add_parser("free-check", parents=[common], help="test a family file for P-freeness")
    p.add_argument("expr")
    p.add_argument("family", type=Path)
    return parser


def _pattern(text: str):
    try:
        tree = parse_expr(text, base_dir=Path.cwd())
    except (ExprSyntaxError, PosetError) as exc:
        raise UsageError(f"bad expression {text!r}: {exc}") from None
    return tree, eval_expr(tree)


def _status(cert: Certificate) -> int:
    if cert.passed:
        return EXIT_PASS
    if cert.verdict == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_FAIL


def _cmd_info(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    b = b_value(p)
    n = args.n if args.n is not None else int(b) + 1
    e = e_composition_bound(tree) if is_base_only(tree) else None
    new, kind = upper_bound_theorem4(p, n)
    old = old_bound(p, n)
    print(f"expr      {format_expr(tree)}", file=out)
    print(f"size={p.size} L={longest_chain(p)} b={b} e={'n/a' if e is None else e}", file=out)
    print(f"bounds at n={n}: double-chain {new} ({kind}), old {old}", file=out)
    return [Certificate("info", PASS, expr=format_expr(tree), n=n, m=b, value=new,
                        details={"size": p.size, "L": longest_chain(p), "b": b,
                                 "e": "n/a" if e is None else e, "bound_kind": kind,
                                 "old_bound": old})]


def _cmd_la(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    try:
        res = la_exact(args.n, p, Budget(args.budget, args.time_limit))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdict = PASS if res.complete else INCONCLUSIVE
    state = "exact" if res.complete else f"inconclusive, open bound {res.upper}"
    print(f"La({args.n}, {format_expr(tree)}) = {res.value} ({state}; {res.method}, "
          f"{res.nodes} nodes)", file=out)
    return [Certificate("la", verdict, expr=format_expr(tree), n=args.n, value=res.value,
                        details={"complete": res.complete, "upper": res.upper,
                                 "method": res.method, "nodes": res.nodes,
                                 "elapsed": f"{res.elapsed:.3f}"},
                        witness=res.witness)]


def _cmd_verify(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    try:
        cert = verify_main_theorem(tree, args.n, Budget(args.budget, args.time_limit),
                                   jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{cert.verdict}: La({args.n}, {cert.expr}) value={cert.value} "
          f"expected Sigma({args.n},{cert.m})={cert.expected}", file=out)
    if "scope" in cert.details:
        print(f"  {cert.details['scope']}", file=out)
    return [cert]


def _cmd_audit(args, out) -> list[Certificate]:
    if args.n < 2:
        raise UsageError("audit-double-chains needs --n >= 2")
    cert = audit_counting(args.n)
    print(f"{cert.value}/{cert.expected} subsets match closed form "
          f"({cert.details['chains']} double chains)", file=out)
    return [cert]


def _cmd_window(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    m = args.m if args.m is not None else b_value(p)
    cert = window_condition(p, m, max_configs=args.max_configs, reduced=not args.full,
                            jobs=args.jobs)
    cert.expr = format_expr(tree)
    line = f"{cert.verdict}: {cert.details['subset_size']}-subsets, " \
           f"{cert.details['configurations']} configurations ({cert.details['mode']})"
    print(line, file=out)
    if cert.witness:
        print(f"  avoiding subset: {cert.witness[0]}", file=out)
    return [cert]


def _cmd_escan(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    if args.m is not None:
        m = args.m
    elif is_base_only(tree):
        m = e_composition_bound(tree)
    else:
        m = int(b_value(p))
    n_max = args.n_max
    if n_max is not None and n_max < m:
        raise UsageError(f"--n-max must be at least m={m}")
    lower = e_lower_scan(p, m, n_max, jobs=args.jobs)
    lower.expr = format_expr(tree)
    print(f"{lower.verdict}: {m} consecutive levels P-free for n in {lower.details.get('n_range', '-')}",
          file=out)
    scan_max = n_max if n_max is not None else max(m + 1, 4)
    w = e_upper_witness(p, m + 1, scan_max)
    if w is None:
        upper = Certificate("e-upper", INCONCLUSIVE, expr=format_expr(tree), n=scan_max, m=m + 1,
                            value="none found", details={"scope": "absence is not a proof"})
        print(f"no embedding into {m + 1} levels for n <= {scan_max}", file=out)
    else:
        ok = check_level_witness(w, p, m + 1)
        upper = Certificate("e-upper", PASS if ok else FAIL, expr=format_expr(tree), n=w.n,
                            m=m + 1, k=w.k, value="contains", details={"e_below": m + 1},
                            witness=[f"{a} -> {format_set(s)}" for a, s in sorted(w.mapping.items())])
        print(f"e < {m + 1}: P embeds in levels {w.k}..{w.k + m} of [{w.n}]", file=out)
    # a missing upper witness does not make the scan fail
    return [lower, upper] if upper.verdict != INCONCLUSIVE else [lower]


def _cmd_free(args, out) -> list[Certificate]:
    tree, p = _pattern(args.expr)
    try:
        fam = load_family(args.family)
    except OSError as exc:
        raise UsageError(f"cannot read {args.family}: {exc.strerror}") from None
    except FamilyError as exc:
        raise UsageError(f"{args.family}: {exc}") from None
    mapping = find_in_family(fam, p)
    if mapping is None:
        print(f"free: {len(fam)} members, no copy of {format_expr(tree)}", file=out)
        return [Certificate("p-free", PASS, expr=format_expr(tree), n=fam.n, value=len(fam))]
    print(f"contains: {format_expr(tree)} found", file=out)
    lines = [f"{a} -> {format_set(s)}" for a, s in sorted(mapping.items())]
    for ln in lines:
        print(f"  {ln}", file=out)
    return [Certificate("p-free", FAIL, expr=format_expr(tree), n=fam.n, value=len(fam),
                        witness=lines)]


COMMANDS = {
    "info": _cmd_info,
    "la": _cmd_la,
    "verify": _cmd_verify,
    "audit-double-chains": _cmd_audit,
    "window-check": _cmd_window,
    "e-scan": _cmd_escan,
    "free-check": _cmd_free,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.jobs = args.jobs if args.jobs is not None else default_jobs()
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        certs = COMMANDS[args.verb](args, out)
    except UsageError as exc:
        print(f"doublechain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"doublechain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.report is not None:
        try:
            args.report.write_text("\n".join(c.to_text() for c in certs))
        except OSError as exc:
            print(f"doublechain: error: cannot write {args.report}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    statuses = [_status(c) for c in certs]
    if EXIT_FAIL in statuses:
        return EXIT_FAIL
    if EXIT_INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def main() -> None:
    sys.exit(run())
