"""Timing comparison of the compiled kernels against the fallback path.

Runs each hot kernel on a representative workload twice: once in-process
(numba-compiled unless KNOTTAB_PURE is already set) and once in a child
process with KNOTTAB_PURE=1.  Compile time is excluded by a warmup call.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("enumerate", "realizability", "coloring", "quandle_search")


def _setup():
    from knottab.codes import enumerate_codes
    from knottab.colortests import affine, count_colorings, enumerate_tests
    from knottab.realize import jordan_test, parity_check, realize

    codes5 = [c for c in enumerate_codes(5) if parity_check(c)]
    diagrams = [realize(c) for c in enumerate_codes(5, canonical_only=True)
                if parity_check(c) and jordan_test(c)]
    seven = affine(7, 1)
    return {
        "enumerate": lambda: sum(1 for _ in enumerate_codes(5,
                                                            canonical_only=True)),
        "realizability": lambda: sum(jordan_test(c) for c in codes5),
        "coloring": lambda: sum(count_colorings(d, seven) for d in diagrams),
        "quandle_search": lambda: len(enumerate_tests(5)),
    }


def run_inprocess(repeat):
    jobs = _setup()
    results = {}
    for name in WORKLOADS:
        fn = jobs[name]
        fn()  # warmup triggers jit compilation
        best = min(_timed(fn) for _ in range(repeat))
        results[name] = best
    return results


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--emit-json", action="store_true",
                    help="print raw timings only (used by the parent run)")
    args = ap.parse_args(argv)

    results = run_inprocess(args.repeat)
    if args.emit_json:
        print(json.dumps(results))
        return 0

    env = dict(os.environ, KNOTTAB_PURE="1")
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--emit-json",
         "--repeat", str(args.repeat)],
        env=env, capture_output=True, text=True, check=True)
    pure = json.loads(out.stdout.strip().splitlines()[-1])

    mode = "pure" if os.environ.get("KNOTTAB_PURE") else "njit"
    print(f"{'kernel workload':<22}{mode:>10}{'pure':>10}{'speedup':>9}")
    for name in WORKLOADS:
        a, b = results[name], pure[name]
        print(f"{name:<22}{a:>9.3f}s{b:>9.3f}s{b / a:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
