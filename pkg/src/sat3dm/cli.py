"""Command-line interface.

Exit codes: 0 = YES/ACCEPT, 1 = NO/REJECT, 2 = usage or input error.
Input files are dispatched on their header line, never on the extension.
"""

from __future__ import annotations

import argparse
import sys
import time
import timeit
from typing import List, Optional, Sequence

from . import matching, oracle, reduce_gj, reduce_linear
from .formula import (
    Formula,
    emit_dimacs,
    evaluate,
    extend_assignment,
    format_assignment,
    normalize,
    parse_assignment,
    parse_dimacs,
)

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    """Reported on stderr with exit code 2."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _expect_kind(text: str, kind: str, path: str) -> None:
    found = matching.detect_kind(text)
    if found != kind:
        raise UsageError(f"{path}: expected a {kind} file, found {found}")


def _linear_for(f: Formula):
    strict, nmap = normalize(f)
    inst, rm = reduce_linear.reduce(strict)
    return strict, nmap, inst, rm


def _check_instance_matches(text: str, path: str, inst, rm) -> None:
    """The instance file must be exactly what the linear reduction of the cnf produces."""
    roles = reduce_linear.parse_role_comments(matching.comment_lines(text))
    if roles is None:
        raise UsageError(f"{path}: no role comments; was it produced by 'reduce --method linear'?")
    if matching.parse_tdm(text) != inst or tuple(roles) != rm.roles:
        raise UsageError(f"{path}: instance does not match the linear reduction of the cnf")


# ---------------------------------------------------------------- commands


def cmd_reduce(args) -> int:
    f = parse_dimacs(_read(args.input))
    strict, _ = normalize(f)
    if args.method == "linear":
        inst, rm = reduce_linear.reduce(strict)
        comments = rm.role_comments()
    else:
        inst = reduce_gj.reduce_gj(strict)
        comments = []
    if args.to == "x3c":
        out = matching.format_x3c(matching.to_x3c(inst))
    else:
        out = matching.format_tdm(inst, comments)
    _write(out, args.output)
    return EXIT_YES


def _solve_cnf(f: Formula):
    if f.num_vars <= oracle.MAX_BRUTE_VARS:
        return oracle.sat_brute(f)
    # too many variables to enumerate: decide through the reduction instead
    if any(not clause for clause in f.clauses):
        return None
    if not f.clauses:
        return {v: False for v in range(1, f.num_vars + 1)}
    _, _, inst, rm = _linear_for(f)
    found = matching.solve_exact(inst)
    if found is None:
        return None
    return reduce_linear.lift_matching(inst, rm, found)


def cmd_solve(args) -> int:
    text = _read(args.input)
    kind = matching.detect_kind(text)
    if kind == "cnf":
        f = parse_dimacs(text)
        a = _solve_cnf(f)
        sys.stdout.write(format_assignment(a, f.num_vars))
        found = a
    elif kind == "3dm":
        found = matching.solve_exact(matching.parse_tdm(text))
        sys.stdout.write(matching.format_selection("3dm", found))
    elif kind == "x3c":
        found = matching.solve_x3c(matching.parse_x3c(text))
        sys.stdout.write(matching.format_selection("x3c", found))
    else:
        raise UsageError(f"{args.input}: a certificate, not an instance")
    return EXIT_YES if found is not None else EXIT_NO


def cmd_verify(args) -> int:
    text = _read(args.instance)
    cert = _read(args.certificate)
    kind, cert_kind = matching.detect_kind(text), matching.detect_kind(cert)
    if cert_kind != kind + "-cert":
        raise UsageError(f"certificate kind {cert_kind} does not fit a {kind} instance")
    if kind == "cnf":
        f = parse_dimacs(text)
        a = parse_assignment(cert)
        if a is None:
            print("REJECT (certificate asserts UNSAT; nothing to check)")
            return EXIT_NO
        ok = evaluate(f, a)
        if ok:
            print("ACCEPT")
        else:
            bad = next(j for j, c in enumerate(f.clauses, 1) if not any(lit.value(a) for lit in c))
            print(f"REJECT (clause {bad} unsatisfied)")
        return EXIT_YES if ok else EXIT_NO
    selected = matching.parse_selection(kind, cert)
    if selected is None:
        print("REJECT (certificate asserts NONE; nothing to check)")
        return EXIT_NO
    if kind == "3dm":
        verdict = matching.verify_matching(matching.parse_tdm(text), selected)
    else:
        verdict = matching.verify_cover(matching.parse_x3c(text), selected)
    print(verdict)
    return EXIT_YES if verdict else EXIT_NO


def cmd_lift(args) -> int:
    f = parse_dimacs(_read(args.cnf))
    text = _read(args.instance)
    _expect_kind(text, "3dm", args.instance)
    _, _, inst, rm = _linear_for(f)
    _check_instance_matches(text, args.instance, inst, rm)
    selected = matching.parse_selection("3dm", _read(args.matching))
    if selected is None:
        raise UsageError(f"{args.matching}: certificate asserts NONE; nothing to lift")
    try:
        a = reduce_linear.lift_matching(inst, rm, selected)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    original = {v: a[v] for v in range(1, f.num_vars + 1)}
    if not evaluate(f, original):
        raise RuntimeError("lifted assignment does not satisfy the input formula")
    sys.stdout.write(format_assignment(original, f.num_vars))
    return EXIT_YES


def cmd_embed(args) -> int:
    f = parse_dimacs(_read(args.cnf))
    a = parse_assignment(_read(args.assignment))
    text = _read(args.instance)
    _expect_kind(text, "3dm", args.instance)
    _, nmap, inst, rm = _linear_for(f)
    _check_instance_matches(text, args.instance, inst, rm)
    if a is None:
        raise UsageError(f"{args.assignment}: certificate asserts UNSAT; nothing to embed")
    if not evaluate(f, a):
        raise UsageError(f"{args.assignment}: assignment does not satisfy the formula")
    selected = reduce_linear.embed_assignment(rm, extend_assignment(f, nmap, a))
    sys.stdout.write(matching.format_selection("3dm", selected))
    return EXIT_YES


def cmd_gen(args) -> int:
    f = oracle.gen_random(oracle.GenConfig(args.n, args.m, args.seed))
    _write(emit_dimacs(f), args.output)
    return EXIT_YES


def _best_time_ns(fn, arg, repeat: int, min_time: float) -> int:
    """Best per-call time over ``repeat`` loops, each loop lasting at least ``min_time`` seconds."""
    timer = timeit.Timer(lambda: fn(arg), timer=time.perf_counter)
    number = 1
    while True:
        elapsed = timer.timeit(number)
        if elapsed >= min_time:
            break
        number *= 2
    best = min([elapsed, *timer.repeat(repeat - 1, number)])
    return round(best / number * 1e9)


BENCH_HEADER = "m,n,triples_linear,triples_gj,reduce_time_linear,reduce_time_gj"


def bench_rows(
    m_list: Sequence[int], n: Optional[int], seed: int, repeat: int = 3, gj_budget: int = 200_000,
    min_time: float = 0.2,
) -> List[str]:
    """CSV rows; the gj time column is empty when the instance exceeds ``gj_budget`` triples."""
    rows = [BENCH_HEADER]
    for m in m_list:
        nv = max(3, m) if n is None else n
        f = oracle.gen_random(oracle.GenConfig(nv, m, seed))
        inst, _ = reduce_linear.reduce(f)
        if len(inst.triples) != 21 * m:
            raise RuntimeError(f"linear reduction produced {len(inst.triples)} triples for m={m}")
        t_lin = _best_time_ns(reduce_linear.reduce, f, repeat, min_time)
        predicted = reduce_gj.gj_size(nv, m, reduce_gj.clause_triple_count(f)).triples
        t_gj = ""
        if predicted <= gj_budget:
            built = len(reduce_gj.reduce_gj(f).triples)
            if built != predicted:
                raise RuntimeError(f"baseline built {built} triples, predicted {predicted}")
            t_gj = str(_best_time_ns(reduce_gj.reduce_gj, f, repeat, min_time))
        rows.append(f"{m},{nv},{21 * m},{predicted},{t_lin},{t_gj}")
    return rows


def cmd_bench(args) -> int:
    try:
        m_list = [int(v) for v in args.m_list.split(",")]
        n = None if args.n == "auto" else int(args.n)
    except ValueError:
        raise UsageError("--m-list must be comma-separated integers and --n an integer or 'auto'") from None
    if any(m < 1 for m in m_list) or (n is not None and n < 1) or args.repeat < 1:
        raise UsageError("m and n values must be positive")
    for row in bench_rows(m_list, n, args.seed, args.repeat, args.gj_budget, args.min_time):
        print(row)
    return EXIT_YES


def _parse_seeds(text: str) -> List[int]:
    seeds = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        seeds.extend(range(int(lo), int(hi or lo) + 1))
    return seeds


def cmd_check(args) -> int:
    try:
        seeds = _parse_seeds(args.seeds)
    except ValueError:
        raise UsageError("--seeds takes values like '1-200' or '1,5,9-12'") from None
    configs = [oracle.GenConfig(args.n, args.m, s) for s in seeds]
    records = oracle.run_suite(configs, args.gj_budget)
    sys.stdout.write(oracle.report_csv(records))
    summary = oracle.summarize(records)
    print(" ".join(f"{k}={v}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_YES if summary["disagree"] == 0 else EXIT_NO


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sat3dm", description="3SAT -> 3DM -> X3C reductions, solvers and certificate tools."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a DIMACS formula to 3DM or X3C")
    p.add_argument("input")
    p.add_argument("--method", choices=("linear", "gj"), default="linear")
    p.add_argument("--to", choices=("3dm", "x3c"), default="3dm")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide a cnf, 3dm or x3c instance and print a certificate")
    p.add_argument("input")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lift", help="turn a perfect matching into a satisfying assignment")
    p.add_argument("cnf")
    p.add_argument("instance")
    p.add_argument("matching")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("embed", help="turn a satisfying assignment into a perfect matching")
    p.add_argument("cnf")
    p.add_argument("assignment")
    p.add_argument("instance")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("gen", help="generate a seeded random strict 3CNF formula")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="instance sizes and reduction times for both reductions")
    p.add_argument("--m-list", default="1,2,4,8,16,32,64")
    p.add_argument("--n", default="auto")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3, help="timing repetitions; the minimum is reported")
    p.add_argument("--min-time", type=float, default=0.2,
                   help="seconds each timing loop must last; calls are batched to reach it")
    p.add_argument("--gj-budget", type=int, default=200_000,
                   help="skip timing the baseline above this many triples")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="run the equivalence suite and print the CSV report")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--seeds", default="1-200")
    p.add_argument("--gj-budget", type=int, default=oracle.DEFAULT_GJ_BUDGET)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (UsageError, ValueError, IndexError) as exc:
        print(f"sat3dm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except RuntimeError as exc:
        print(f"sat3dm {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
