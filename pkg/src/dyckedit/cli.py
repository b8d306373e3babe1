"""Command-line front end: compute, gen, selftest, bench.

Exit codes: 0 success, 1 usage / parse / guard error, 2 invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .core import ParenSeq, reduce_valleys
from .encoding import FORMATS, ParseError, dumps, parse
from .generate import nested_instance, planted_instance
from .geometry import build_decomposition, height_bound_violated
from .minplus import STRATEGIES, MinPlusParams, minplus_bd
from .oracle import EXHAUSTIVE_MAX_LEN, dp_cubic, exhaustive_distance, minplus_naive
from .solver import SolveStats, solve_fast, solve_k5, solve_quadratic
from .valiant import InvariantViolation

ALGOS = ("exhaustive", "cubic", "valley", "k5", "fast")
CSV_SCHEMA = "dyckedit-bench/1"
CSV_FIELDS = ("schema", "algo", "n", "k", "seed", "wall_time", "distance", "kernel_calls",
              "bd_calls", "triples_covered", "clusters", "trapezoids", "extended_total")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _params(args) -> MinPlusParams:
    return MinPlusParams(args.delta, args.rho, args.strategy, args.seed)


def run_algo(algo: str, s: ParenSeq, k: int, params: MinPlusParams | None = None,
             stats: SolveStats | None = None, debug: bool = False) -> int:
    if k < 0:
        raise UsageError("k must be non-negative")
    if algo == "exhaustive":
        if len(s) > EXHAUSTIVE_MAX_LEN:
            raise UsageError(f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_LEN}, got n={len(s)}")
        return exhaustive_distance(s, k)
    if algo == "cubic":
        return dp_cubic(s, k).distance
    if algo == "valley":
        return solve_quadratic(s, k)
    if algo == "k5":
        return solve_k5(s, k, stats)
    if algo == "fast":
        return solve_fast(s, k, params, stats, debug=debug)
    raise UsageError(f"unknown algorithm {algo!r}")


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_compute(args) -> int:
    s = parse(_read_input(args.input), args.format, args.types)
    k = len(s) if args.k is None else args.k
    stats = SolveStats()
    t0 = time.perf_counter()
    d = run_algo(args.algo, s, k, _params(args), stats, args.debug)
    elapsed = time.perf_counter() - t0
    print(d)
    print(f"algo={args.algo} n={len(s)} k={k} time={elapsed:.6f}s", file=sys.stderr)
    if args.tree:
        red = reduce_valleys(s, k)
        if red.rejected or height_bound_violated(red.seq, k) or len(red.seq) == 0:
            print("tree: none (input rejected or empty after reduction)", file=sys.stderr)
        else:
            print(build_decomposition(red.seq, k).dump(), file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    if args.nested:
        inst = nested_instance(args.n // 2, args.types, args.edits, rng)
    else:
        inst = planted_instance(args.n, args.types, args.edits, rng)
    text = dumps(inst.seq, args.format)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(f"upper_bound={inst.edits} n={len(inst.seq)} types={args.types}", file=sys.stderr)
    return 0


def _selftest_case(s: ParenSeq, k: int, failures: list[str]) -> int:
    want = dp_cubic(s, k).distance
    got = {"valley": solve_quadratic(s, k), "k5": solve_k5(s, k)}
    if len(s) <= 12:
        got["exhaustive"] = exhaustive_distance(s, k)
    for strategy in STRATEGIES:
        got[f"fast-{strategy}"] = solve_fast(s, k, MinPlusParams(strategy=strategy), min_cluster=8,
                                             debug=True)
    checks = 0
    for name, value in got.items():
        checks += 1
        if value != want:
            failures.append(f"{name} gave {value}, cubic gave {want} on {s!r} with k={k}")
    return checks


def _selftest_minplus(rng: np.random.Generator, failures: list[str]) -> int:
    n, s, m = (int(x) for x in rng.integers(1, 48, size=3))
    s = min(s, 11)
    A = np.cumsum(rng.integers(-1, 2, size=(n, s)), axis=0) + rng.integers(-8, 8, size=s)
    B = np.cumsum(rng.integers(-1, 2, size=(m, s)), axis=0).T + rng.integers(-8, 8, size=(s, 1))
    want = minplus_naive(A, B)
    checks = 0
    for strategy in STRATEGIES:
        got = minplus_bd(A, B, MinPlusParams(int(rng.integers(1, 6)), 2, strategy, int(rng.integers(1 << 31))))
        checks += 1
        if not np.array_equal(got, want):
            failures.append(f"minplus_bd[{strategy}] differs from the naive product on {n}x{s}x{m}")
    return checks


def cmd_selftest(args) -> int:
    root = np.random.SeedSequence(args.seed)
    failures: list[str] = []
    checks = 0
    for trial, child in enumerate(root.spawn(args.trials)):
        rng = np.random.default_rng(child)
        n = int(rng.integers(0, args.max_n + 1))
        types = int(rng.integers(1, 4))
        edits = int(rng.integers(0, 6))
        if trial % 3 == 0:
            s = ParenSeq(rng.integers(0, 2 * types, size=n), types)
        elif trial % 3 == 1:
            s = planted_instance(n, types, edits, rng).seq
        else:
            s = nested_instance(n // 2, types, edits, rng).seq
        for k in sorted({max(edits - 1, 0), edits, edits + 3}):
            checks += _selftest_case(s, k, failures)
        checks += _selftest_minplus(rng, failures)
    for line in failures[:20]:
        print("FAIL", line)
    print(f"selftest: {checks - len(failures)} passed, {len(failures)} failed, seed={args.seed}")
    return 2 if failures else 0


_WARM: set[str] = set()


def _bench_point(job: tuple) -> dict:
    algo, n, k, seed, params = job
    if algo not in _WARM:
        # keep JIT compilation out of the first timed row
        run_algo(algo, planted_instance(12, 2, 2, np.random.default_rng(0)).seq, 2, params)
        _WARM.add(algo)
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, k]))
    s = planted_instance(n, 2, k, rng).seq
    stats = SolveStats()
    t0 = time.perf_counter()
    d = run_algo(algo, s, k, params, stats)
    wall = time.perf_counter() - t0
    return {"schema": CSV_SCHEMA, "algo": algo, "n": n, "k": k, "seed": seed,
            "wall_time": f"{wall:.6f}", "distance": d, "kernel_calls": stats.kernel_calls,
            "bd_calls": stats.extra.get("bd_calls", 0), "triples_covered": stats.triples_covered,
            "clusters": stats.clusters, "trapezoids": stats.trapezoids,
            "extended_total": stats.extended_total}


def cmd_bench(args) -> int:
    params = _params(args)
    jobs = []
    for algo in args.algos:
        if algo not in ALGOS:
            raise UsageError(f"unknown algorithm {algo!r}")
        for n in args.sizes:
            if algo == "exhaustive" and n > EXHAUSTIVE_MAX_LEN:
                continue
            for k in args.ks:
                for r in range(args.repeats):
                    jobs.append((algo, n, k, args.seed + r, params))
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_point, jobs))
    else:
        rows = [_bench_point(j) for j in jobs]
    rows.sort(key=lambda r: (r["algo"], r["n"], r["k"], r["seed"]))
    out = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="", encoding="utf-8")
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dyckedit", description="Dyck edit distance under a threshold.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def kernel_flags(q):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--delta", type=int, default=None)
        q.add_argument("--rho", type=int, default=None)
        q.add_argument("--strategy", choices=STRATEGIES, default="greedy")

    c = sub.add_parser("compute", help="distance of one sequence")
    c.add_argument("--algo", choices=ALGOS, default="k5")
    c.add_argument("--k", type=int, default=None, help="threshold (default: n, i.e. exact)")
    c.add_argument("--input", default="-")
    c.add_argument("--format", choices=FORMATS, default="ascii")
    c.add_argument("--types", type=int, default=None)
    c.add_argument("--tree", action="store_true", help="dump the decomposition tree to stderr")
    c.add_argument("--debug", action="store_true", help="check recursion invariants")
    kernel_flags(c)
    c.set_defaults(func=cmd_compute)

    g = sub.add_parser("gen", help="random Dyck sequence with planted edits")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--types", type=int, default=2)
    g.add_argument("--edits", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--nested", action="store_true", help="one deep nest instead of a random shape")
    g.add_argument("--format", choices=FORMATS, default="ascii")
    g.add_argument("--output", default="-")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("selftest", help="cross-check all algorithms on random inputs")
    t.add_argument("--max-n", type=int, default=40)
    t.add_argument("--trials", type=int, default=60)
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_selftest)

    b = sub.add_parser("bench", help="timing grid written as CSV")
    b.add_argument("--algos", type=lambda x: x.split(","), default=["k5", "fast"])
    b.add_argument("--sizes", type=_int_list, default=[256, 1024, 4096])
    b.add_argument("--ks", type=_int_list, default=[2, 4, 8])
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--csv", default="-")
    kernel_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, UsageError, OSError, ValueError) as exc:
        print(f"dyckedit: error: {exc}", file=sys.stderr)
        return 1
    except (InvariantViolation, AssertionError) as exc:
        print(f"dyckedit: invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
