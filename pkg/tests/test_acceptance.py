"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""
import filecmp
import time

import numpy as np
import pytest

from counterabs.benchmarks import NAMES, load_fixture
from counterabs.chc import emit_horn
from counterabs.cli import main as cli_main
from counterabs.frontend import resolve_formula
from counterabs.logic import disj
from counterabs.oracle import (
    bounded_reach, check_equiv_bounded, check_simulation, check_strongest, counter_grid, pair_grid_chunks,
    realizable_tuples,
)
from counterabs.predicate import LinearPredicate
from counterabs.presburger import TRUE_SET, eliminate_int_var, fm_real
from counterabs.runner import Target, build_target, horn_comments
from counterabs.solver import run_solver, solver_available
from conftest import spec_of, system_of
from qe_oracle import FREE_VALUES, X, disj_mask, exists_mask, random_sets, set_mask

RESULTS = {}


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[k] = line
    print(line)
    return ok


# ------------------------------------------------------------ criterion 1


def test_criterion_1_ot_abstraction_matches_reference(ot, ot_spec, ot_cs):
    t0 = time.perf_counter()
    phi_text, iota_text, tau_texts = ot.expected_texts()
    ref_iota = LinearPredicate.from_formula(resolve_formula(ot_spec, iota_text))
    ref_tau = LinearPredicate.from_formula(disj(*(resolve_formula(ot_spec, t, allow_primed=True) for t in tau_texts)))
    iota = LinearPredicate.from_system(ot_cs, "iota0")
    tau = LinearPredicate.from_system(ot_cs, "tau0")
    phi = LinearPredicate.from_system(ot_cs, "phi0")
    names = list(ot_cs.counters)
    problems, pairs = [], 0
    phi_true = phi_text == "true" and ot_cs.phi0 == [TRUE_SET]
    if not phi_true:
        problems.append("phi0 is not true")
    for n in range(3, 10):
        g = counter_grid(names, n, {"N": n})
        if not phi.mask(g).all():
            problems.append(f"phi0 rejects a tuple at N={n}")
        r = check_equiv_bounded(iota, ref_iota, g)
        if not r:
            problems.append(f"iota0 differs at {r.counterexample}")
        r = check_equiv_bounded(tau, ref_tau, pair_grid_chunks(names, n, {"N": n}))
        pairs += r.checked
        if not r:
            problems.append(f"tau0 differs at {r.counterexample}")
    took = time.perf_counter() - t0
    ok = not problems and took < 120
    detail = (f"iota0/tau0 equal to the reference for N=3..9 ({pairs} pairs), phi0 = true, {took:.1f} s"
              if ok else "; ".join(problems) + f" ({took:.1f} s)")
    assert report(1, ok, detail), detail


# ---------------------------------------------------------- criteria 2, 3


def test_criterion_2_simulation(ot, ot_raw, ot_cs):
    t0 = time.perf_counter()
    reps = [check_simulation(ot_raw, ot_cs, n) for n in (3, 4)]
    took = time.perf_counter() - t0
    cex = sum(len(r.counterexamples) for r in reps)
    ok = all(r.simulation_holds for r in reps) and cex == 0 and took < 300
    counts = ", ".join(f"N={r.checked_n}: {r.concrete_state_count} states/{r.concrete_transition_count} transitions"
                       for r in reps)
    assert report(2, ok, f"simulation at N=3,4 ({counts}), {cex} counterexamples, {took:.1f} s"), reps[-1].to_text()


def test_criterion_3_strongest(ot, ot_raw, ot_cs):
    t0 = time.perf_counter()
    reps = [check_strongest(ot_raw, ot_cs, n) for n in (3, 4)]
    took = time.perf_counter() - t0
    cex = sum(len(r.counterexamples) for r in reps)
    skipped = sum(r.skipped_tuples for r in reps)
    ok = all(r.strongest_holds for r in reps) and cex == 0 and took < 600
    assert report(3, ok, f"strongest at N=3,4, {cex} violations, {skipped} unrealizable tuples skipped, "
                         f"{took:.1f} s"), reps[-1].to_text()


# ------------------------------------------------------------ criterion 4


def _solve_row(name, prop, tmp_path):
    fx = load_fixture(name)
    p = fx.get_property(prop)
    target = Target(p.spec_file, p.name, p.bad, p.init, p.expected)
    t0 = time.perf_counter()
    built = build_target(target)
    horn = emit_horn(built.system, built.bad, built.init, comments=horn_comments(target))
    path = tmp_path / f"{name}_{prop}.smt2"
    path.write_text(horn.text)
    res = run_solver(path, timeout=60)
    return res.verdict, p.expected, time.perf_counter() - t0


def test_criterion_4_solver_verdicts(tmp_path):
    if not solver_available():
        report(4, False, "no Horn solver on PATH (set COUNTERABS_SOLVER)")
        pytest.fail("no Horn solver available")
    rows = [("ot", p.name) for p in load_fixture("ot").properties] + [("ot_buggy", "agreement")]
    bad, slowest = [], 0.0
    for name, prop in rows:
        verdict, expected, took = _solve_row(name, prop, tmp_path)
        slowest = max(slowest, took)
        if verdict != expected or took >= 60:
            bad.append(f"{name}/{prop}: {verdict} in {took:.1f} s (expected {expected})")
    info = []
    for name in ("srbp", "bbp", "srbp_buggy", "bbp_buggy"):
        for p in load_fixture(name).properties:
            verdict, expected, _ = _solve_row(name, p.name, tmp_path)
            info.append(verdict == expected)
    detail = (f"4 OT properties sat, buggy OT unsat, slowest total {slowest:.1f} s; "
              f"informational SRBP/BBP rows {sum(info)}/{len(info)} as expected")
    ok = not bad
    assert report(4, ok, detail if ok else "; ".join(bad)), bad


# ------------------------------------------------------------ criterion 5


def test_criterion_5_bounded_reach():
    t0 = time.perf_counter()
    problems = []
    for p in load_fixture("ot").properties:
        built = build_target(Target(p.spec_file, p.name, p.bad, p.init))
        for n in range(3, 7):
            r = bounded_reach(built.system, n, built.bad, built.init)
            if r:
                problems.append(f"{p.name} reachable at N={n}")
    p = load_fixture("ot_buggy").get_property("agreement")
    built = build_target(Target(p.spec_file, p.name, p.bad, p.init))
    hit = next((n for n in range(3, 7) if bounded_reach(built.system, n, built.bad, built.init)), None)
    if hit is None:
        problems.append("buggy agreement unreachable for N <= 6")
    took = time.perf_counter() - t0
    ok = not problems and took < 120
    detail = (f"4 OT properties unreachable at N=3..6, buggy agreement reachable at N={hit}, {took:.1f} s"
              if ok else "; ".join(problems) + f" ({took:.1f} s)")
    assert report(5, ok, detail), detail


# ------------------------------------------------------------ criterion 6


def test_criterion_6_quantifier_elimination():
    t0 = time.perf_counter()
    sets = random_sets(1000, seed=20261017)
    wrong, unsound = 0, 0
    for cs in sets:
        truth = exists_mask(cs)
        res, exact = eliminate_int_var(X, cs)
        got = disj_mask(res, FREE_VALUES)
        if not exact or not np.array_equal(got, truth):
            wrong += 1
        if (got & ~set_mask(fm_real(X, cs), FREE_VALUES)).any():
            unsound += 1
    took = time.perf_counter() - t0
    ok = wrong == 0 and unsound == 0 and took < 60
    assert report(6, ok, f"{len(sets)} random instances: {wrong} disagreements with brute force, "
                         f"{unsound} fm_real soundness failures, {took:.1f} s"), (wrong, unsound)


# ------------------------------------------------------------ criterion 7


def _corpus_files():
    return [path for name in NAMES for path in load_fixture(name).spec_files()]


def test_criterion_7_deterministic_builds(tmp_path, capsys):
    diffs = []
    files = _corpus_files()
    for k, path in enumerate(files):
        outs = []
        for run in ("a", "b"):
            out = tmp_path / run / f"{k}_{path.parent.name}_{path.stem}.smt2"
            out.parent.mkdir(exist_ok=True)
            code = cli_main(["build", str(path), "-o", str(out), "--emit-json"])
            if code != 0:
                diffs.append(f"{path}: exit {code}")
            outs.append(out)
        for a, b in ((outs[0], outs[1]), (outs[0].with_suffix(".json"), outs[1].with_suffix(".json"))):
            if not filecmp.cmp(a, b, shallow=False):
                diffs.append(f"{a.name} differs")
    capsys.readouterr()
    ok = not diffs
    assert report(7, ok, f"{len(files)} corpus files built twice, HORN and JSON byte-identical" if ok
                  else "; ".join(diffs)), diffs


# ------------------------------------------------------------ criterion 8


def _discipline(spec, cs, n):
    """``iota0 |= phi0`` and ``phi0 & tau0 |= phi0'`` over the realizable tuples at ``N = n``."""
    names = list(cs.state_names)
    params = set(cs.params)
    rows = np.array(realizable_tuples(spec, n), dtype=np.int64).reshape(-1, len(names))
    g = {k: rows[:, j] for j, k in enumerate(names)}
    phi = LinearPredicate.from_system(cs, "phi0")
    iota = LinearPredicate.from_system(cs, "iota0")
    tau = LinearPredicate.from_system(cs, "tau0")
    in_phi = phi.mask(g)
    if (iota.mask(g) & ~in_phi).any():
        return "iota0 does not imply phi0"
    # a pair can only break the step condition when its target leaves phi0
    head = len(cs.params)
    for t in np.nonzero(~in_phi)[0]:
        src = rows[(rows[:, :head] == rows[t, :head]).all(axis=1)]
        pair = {k: src[:, j] for j, k in enumerate(names)}
        for j, k in enumerate(names):
            if k not in params:
                pair[k + "'"] = np.full(len(src), rows[t, j], dtype=np.int64)
        if (phi.mask(pair) & tau.mask(pair)).any():
            return f"a phi0 & tau0 step leaves phi0 at N={n}"
    return None


def test_criterion_8_invariant_discipline():
    t0 = time.perf_counter()
    problems, checked = [], 0
    for path in _corpus_files():
        spec, cs = spec_of(path), system_of(path)
        for n in range(3, 10):
            why = _discipline(spec, cs, n)
            checked += 1
            if why:
                problems.append(f"{path.parent.name}/{path.name}: {why}")
                break
    took = time.perf_counter() - t0
    ok = not problems
    assert report(8, ok, f"{len(_corpus_files())} corpus systems, N=3..9 ({checked} grids), {took:.1f} s" if ok
                  else "; ".join(problems)), problems
