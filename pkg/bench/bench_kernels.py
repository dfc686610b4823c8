"""Time the compiled grid kernels against the numpy fallback.

    python3 bench/bench_kernels.py [--n 6] [--repeat 3]

Workloads: the OT transition relation evaluated on every ordered pair of
counter tuples at ``N = n``, and enumeration of those tuples.
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from counterabs.benchmarks import load_fixture
from counterabs.frontend import load_spec_file
from counterabs.kernels import pure
from counterabs.oracle import pair_grid_chunks
from counterabs.pipeline import build_counter_system
from counterabs.predicate import LinearPredicate

try:
    from counterabs.kernels import _ckernels as compiled
except ImportError:
    compiled = None


def _best(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), out


def _tau_workload(n):
    cs = build_counter_system(load_spec_file(load_fixture("ot").spec_file))
    tau = LinearPredicate.from_system(cs, "tau0")
    chunks = list(pair_grid_chunks(list(cs.counters), n, {"N": n}))
    rows = sum(len(next(iter(g.values()))) for g in chunks)

    def run(impl):
        return lambda: np.concatenate([tau.mask(g, backend=impl) for g in chunks])

    return f"tau0 mask, N={n} ({rows} pairs, {len(cs.tau0)} disjuncts)", run


def _compositions_workload(n):
    total, parts = 3 * n, 8

    def run(impl):
        return lambda: impl.compositions(total, parts)

    return f"compositions({total}, {parts})", run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels not built; only the numpy fallback is available")
    print(f"{'workload':<52} {'numpy s':>9} {'cython s':>9} {'speedup':>8}")
    for label, run in (_tau_workload(args.n), _compositions_workload(args.n)):
        py_best, _, py_out = _best(run(pure), args.repeat)
        if compiled is None:
            print(f"{label:<52} {py_best:>9.3f} {'-':>9} {'-':>8}")
            continue
        c_best, _, c_out = _best(run(compiled), args.repeat)
        if not np.array_equal(py_out, c_out):
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:<52} {py_best:>9.3f} {c_best:>9.3f} {py_best / c_best:>7.1f}x")


if __name__ == "__main__":
    main()
