"""Command-line driver: build, inspect, solve, check, reach and bench.

Exit codes: 0 success (verdicts as expected), 1 check or verdict failure,
2 input or configuration error, 3 environment error (solver missing or broken).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, kernels
from .chc import emit_horn
from .errors import BudgetExceeded, CounterAbsError, SolverNotFound, SolverTimeout, UnparseableVerdict
from .oracle import DEFAULT_STATE_BUDGET, bounded_reach, check_simulation, check_strongest
from .pipeline.system import BuildOptions, CounterSystem
from .runner import CSV_HEADER, bench_row, build_target, corpus_rows, horn_comments, resolve_target
from .solver import SOLVER_ENV, describe_verdict, run_solver, solver_available

OK, FAIL, INPUT_ERROR, ENV_ERROR = 0, 1, 2, 3
log = logging.getLogger("counterabs")


class ConfigError(Exception):
    pass


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _ms(v):
    return f"{v:.0f} ms"


def _options(args):
    return BuildOptions(relax=args.relax, size_limit=args.size_limit,
                        atom_budget=args.atom_budget, cell_budget=args.cell_budget)


def _target(args):
    return resolve_target(args.input, args.prop, args.unsafe, args.init)


def _print_stats(cs, build_ms, out):
    s = cs.stats
    print(f"cases: {s.get('cases', 0)}", file=out)
    print(f"atoms: {s.get('atoms', 0)}", file=out)
    print(f"assignments survived: {s.get('assignments', 0)}", file=out)
    print(f"cells: init {s.get('cells_init', 0)}, trans {s.get('cells_trans', 0)}", file=out)
    print(f"disjuncts: phi0 {len(cs.phi0)}, iota0 {len(cs.iota0)}, tau0 {len(cs.tau0)}", file=out)
    if cs.auto_counters:
        names = ", ".join(f"{n} = {d}" for n, d in cs.auto_counters)
        print(f"auto-declared counters: {names}", file=out)
    print(f"exact: {'yes' if cs.exact else 'no (relaxed)'}", file=out)
    print(f"build time: {_ms(build_ms)}", file=out)


def _default_output(target):
    # benchmark directories name their outputs; variant spec files share the directory name
    bench_dir = target.spec_file.name == "spec.cf" or (target.spec_file.parent / "properties.json").exists()
    stem = target.spec_file.parent.name if bench_dir else target.spec_file.stem
    return Path(f"{stem}_{target.property}.smt2" if target.property else f"{stem}.smt2")


def _build_and_write(args):
    target = _target(args)
    if target.note:
        print(f"note: {target.note}")
    built = build_target(target, _options(args))
    t0 = time.perf_counter()
    horn = emit_horn(built.system, built.bad, built.init, comments=horn_comments(target))
    emit_ms = (time.perf_counter() - t0) * 1000
    out = Path(args.output) if args.output else _default_output(target)
    out.write_text(horn.text, encoding="utf-8")
    json_path = None
    if args.emit_json:
        json_path = out.with_suffix(".json")
        json_path.write_text(built.system.to_json(), encoding="utf-8")
    return target, built, out, json_path, built.build_ms + emit_ms


# ----------------------------------------------------------------- commands


def cmd_build(args):
    target, built, out, json_path, total = _build_and_write(args)
    _print_stats(built.system, total, sys.stdout)
    print(f"wrote {out}")
    if json_path:
        print(f"wrote {json_path}")
    return OK


def cmd_inspect(args):
    target = _target(args)
    built = build_target(target, _options(args))
    cs = built.system
    print(f"params: {', '.join(cs.params)}")
    print(f"integer variables: {', '.join(cs.intvars) or '-'}")
    for n in cs.counters:
        print(f"counter {n} = {cs.counter_defs[n]}")
    for n, t, d in cs.locals:
        print(f"local {n} = ({t}) div {d}")
    for part in ("phi0", "iota0", "tau0"):
        ds = getattr(cs, part)
        print(f"{part}: {len(ds)} disjunct(s)")
        for k, d in enumerate(ds):
            print(f"  [{k}] " + (" & ".join(d.strings()) or "true"))
    _print_stats(cs, built.build_ms, sys.stdout)
    return OK


def cmd_solve(args):
    if not solver_available(args.solver):
        raise SolverNotFound(f"solver not found: {args.solver or 'default'} (set --solver or ${SOLVER_ENV})")
    target, built, out, _, build_ms = _build_and_write(args)
    try:
        res = run_solver(out, args.solver, args.timeout)
        verdict, solve_ms = res.verdict, res.elapsed_ms
    except SolverTimeout:
        verdict, solve_ms = "timeout", args.timeout * 1000
    print(f"verdict: {describe_verdict(verdict)}")
    print(f"build time: {_ms(build_ms)}")
    print(f"solve time: {_ms(solve_ms)}")
    print(f"total time: {_ms(build_ms + solve_ms)}")
    if target.expected is not None:
        ok = verdict == target.expected
        print(f"expected: {describe_verdict(target.expected)} ({'as expected' if ok else 'MISMATCH'})")
        return OK if ok else FAIL
    return OK if verdict == "sat" else FAIL


def _check_ns(args):
    ns = args.n or [3]
    if any(n < 1 for n in ns):
        raise ConfigError("--n values must be >= 1")
    return ns


def cmd_check(args):
    from .frontend import load_spec_file

    ns = _check_ns(args)
    target = _target(args)
    raw = load_spec_file(target.spec_file, desugar=False)
    if args.inject_abstraction:
        with open(args.inject_abstraction, encoding="utf-8") as fh:
            cs = CounterSystem.from_json(fh.read())
        print(f"using injected abstraction {args.inject_abstraction}")
    else:
        cs = build_target(target, _options(args)).system
    if not cs.exact:
        print("note: relaxed abstraction; the strongest check is expected to fail")
    reports = []
    code = OK
    for n in ns:
        t0 = time.perf_counter()
        rep = check_simulation(raw, cs, n, budget=args.state_budget)
        check_strongest(raw, cs, n, report=rep, budget=args.state_budget)
        reports.append(rep)
        if args.json:
            continue
        print(rep.to_text())
        print(f"  time: {_ms((time.perf_counter() - t0) * 1000)}")
        if not (rep.simulation_holds and rep.strongest_holds):
            code = FAIL
    if args.json:
        print(json.dumps([r.to_json_obj() for r in reports], indent=2, sort_keys=True))
        code = OK if all(r.simulation_holds and r.strongest_holds for r in reports) else FAIL
    return code


def cmd_reach(args):
    ns = _check_ns(args)
    target = _target(args)
    built = build_target(target, _options(args))
    found = False
    for n in ns:
        t0 = time.perf_counter()
        r = bounded_reach(built.system, n, built.bad, built.init, budget=args.state_budget)
        took = _ms((time.perf_counter() - t0) * 1000)
        if r:
            found = True
            print(f"N = {n}: bad state reachable in {len(r.trace) - 1} step(s) ({took})")
            for k, state in enumerate(r.trace):
                print(f"  {k}: " + ", ".join(f"{a}={b}" for a, b in state.items()))
        else:
            print(f"N = {n}: unreachable ({r.explored} abstract states explored, {took})")
    if target.expected is not None:
        ok = found == (target.expected == "unsat")
        print("as expected" if ok else "MISMATCH with the expected verdict")
        return OK if ok else FAIL
    return FAIL if found else OK


def _run_row(job):
    return bench_row(*job)


def cmd_bench(args):
    rows = corpus_rows(buggy=args.buggy)
    if args.only:
        rows = [r for r in rows if r[0] in args.only]
    solve = not args.no_solve and solver_available(args.solver)
    if not solve and not args.no_solve:
        print("no solver available: build-only table")
    options = _options(args)
    jobs = [(b, p, solve, args.solver, args.timeout, options) for b, p in rows]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_row, jobs))
    else:
        results = [_run_row(j) for j in jobs]

    header = ["Algorithm", "Property", "Build", "Solve", "Total", "Verdict", "Exact"]
    table = []
    for r in results:
        verdict = "error" if r.error else (describe_verdict(r.verdict) if r.verdict != "n/a" else "n/a")
        if not r.matches:
            verdict += " (MISMATCH)"
        solve_txt = "-" if r.solve_ms is None else f"{r.solve_ms:.0f}"
        table.append([r.benchmark, r.display, f"{r.build_ms:.0f}", solve_txt, f"{r.total_ms:.0f}", verdict,
                      "" if r.exact is None else ("yes" if r.exact else "no")])
    widths = [max(len(str(x)) for x in col) for col in zip(header, *table)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)) + "   (times in ms)")
    for row in table:
        print("  ".join(str(x).ljust(w) for x, w in zip(row, widths)))
    for r in results:
        if r.error:
            print(f"error in {r.benchmark}/{r.property}: {r.error}")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow(r.csv_fields())
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
        print(f"wrote {args.csv}")
    else:
        print()
        print(buf.getvalue(), end="")
    return OK if all(r.matches for r in results) else FAIL


# ------------------------------------------------------------------- parser


def _add_build_flags(p, with_output=True):
    p.add_argument("input", help="spec file (.cf) or shipped benchmark name")
    g = p.add_argument_group("safety goal")
    g.add_argument("--prop", help="property name from the properties.json next to the spec")
    g.add_argument("--unsafe", help="bad-state formula overriding the spec's unsafe section")
    g.add_argument("--init", help="extra initial condition conjoined to the abstract init")
    b = p.add_argument_group("pipeline")
    b.add_argument("--relax", action="store_true", help="allow the real-relaxation fallback (inexact)")
    b.add_argument("--size-limit", type=int, default=5000, help="constraints per disjunct before relaxing")
    b.add_argument("--atom-budget", type=int, default=BuildOptions.atom_budget)
    b.add_argument("--cell-budget", type=int, default=BuildOptions.cell_budget)
    if with_output:
        p.add_argument("-o", "--output", help="HORN output path")
        p.add_argument("--emit-json", action="store_true", help="also write the CounterSystem JSON")


def _add_solver_flags(p):
    p.add_argument("--solver", help=f"solver command template with {{file}} (default ${SOLVER_ENV} or 'z3 {{file}}')")
    p.add_argument("--timeout", type=_positive_float, default=60.0, help="solver timeout in seconds")


def make_parser():
    ap = argparse.ArgumentParser(prog="counterabs", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"counterabs {__version__} (kernels: {kernels.BACKEND})")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write the HORN problem for a spec and safety goal")
    _add_build_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("inspect", help="print the generated abstraction")
    _add_build_flags(p, with_output=False)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("solve", help="build, then run an external Horn solver")
    _add_build_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="explicit-state simulation and strongest checks at fixed N")
    _add_build_flags(p, with_output=False)
    p.add_argument("--n", type=int, action="append", help="process count (repeatable, default 3)")
    p.add_argument("--inject-abstraction", help="CounterSystem JSON to check instead of building one")
    p.add_argument("--json", action="store_true", help="print reports as JSON")
    p.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reach", help="solver-free bounded reachability on the abstraction")
    _add_build_flags(p, with_output=False)
    p.add_argument("--n", type=int, action="append", help="process count (repeatable, default 3)")
    p.add_argument("--state-budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("bench", help="build and solve the shipped corpus")
    _add_solver_flags(p)
    p.add_argument("--no-solve", action="store_true", help="build-only table")
    p.add_argument("--buggy", action="store_true", help="append the mutated benchmarks")
    p.add_argument("--only", action="append", help="restrict to a benchmark (repeatable)")
    p.add_argument("--csv", help="write the CSV table to this path")
    p.add_argument("--jobs", type=int, default=1, help="rows run in parallel worker processes")
    p.add_argument("--relax", action="store_true")
    p.add_argument("--size-limit", type=int, default=5000)
    p.add_argument("--atom-budget", type=int, default=BuildOptions.atom_budget)
    p.add_argument("--cell-budget", type=int, default=BuildOptions.cell_budget)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SolverNotFound, UnparseableVerdict) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return ENV_ERROR
    except BudgetExceeded as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (CounterAbsError, ConfigError, FileNotFoundError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {type(e).__name__}: {msg}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
