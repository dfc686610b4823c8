import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from counterabs.errors import StateBudgetExceeded
from counterabs.frontend import load_spec, resolve_formula
from counterabs.logic import ConcreteState
from counterabs.logic.linear import LE
from counterabs.oracle import (
    bounded_reach, check_equiv_bounded, check_simulation, check_strongest, counter_grid, enumerate_states,
    enumerate_transitions, project_state, projected_successors,
)
from counterabs.pipeline import build_counter_system
from counterabs.presburger import LinearConstraintSet

BOT = 0  # Acc = {bot, 0, 1}
SMALL = """params: N;
sorts: Val = {0, 1};
arrays: V : Val;
counters: z0 = #{k | V(k) = 0}; z1 = #{k | V(k) = 1};
init: forall x . V(x) = 0;
"""


def _small(trans, extra=""):
    return load_spec(SMALL + extra + f"trans: {trans};\n")


def test_enumerate_ot_states(ot_spec):
    assert len(enumerate_states(ot_spec, 3)) == 2 ** 3 * 3 ** 3


def test_enumerate_single_array():
    assert len(enumerate_states(_small("forall i . V'(i) = V(i)"), 1)) == 2


def test_enumerate_false_invariant():
    spec = load_spec(SMALL.replace("init:", "invariant: forall x . V(x) = 0 & V(x) = 1;\ninit:")
                     + "trans: forall i . V'(i) = V(i);\n")
    assert enumerate_states(spec, 2) == []


def test_enumerate_budget(ot_spec):
    with pytest.raises(StateBudgetExceeded):
        enumerate_states(ot_spec, 3, budget=100)


def test_transitions_identity_frame():
    spec = _small("forall i . V'(i) = V(i)")
    pairs = list(enumerate_transitions(spec, 3))
    assert len(pairs) == 8 and all(a == b for a, b in pairs)


def test_transitions_false():
    spec = _small("forall i . V'(i) = 0 & V'(i) = 1")
    assert list(enumerate_transitions(spec, 2)) == []


def test_ot_transitions_nonempty(ot_spec):
    succ = projected_successors(ot_spec, 3)
    assert sum(sum(c.values()) for c in succ.values()) > 0


def test_project_state_example(ot_spec):
    # A = [bot, bot, bot], V = [0, 0, 1]
    s = ConcreteState(3, {"N": 3}, {}, {"A": (BOT,) * 3, "V": (0, 0, 1)})
    p = project_state(s, ot_spec)
    assert tuple(p[k] for k in ("z00", "z10", "zb0", "z01", "z11", "zb1")) == (0, 0, 2, 0, 0, 1)
    assert p["N"] == 3


def test_project_all_bot_zero(ot_spec):
    s = ConcreteState(4, {"N": 4}, {}, {"A": (BOT,) * 4, "V": (0,) * 4})
    p = project_state(s, ot_spec)
    assert p["zb0"] == 4 and sum(p[k] for k in ot_spec.counter_names) == 4


def test_project_unsat_counter():
    spec = load_spec(SMALL.replace("z1 = #{k | V(k) = 1}", "z1 = #{k | V(k) = 1 & V(k) = 0}")
                     + "trans: forall i . V'(i) = V(i);\n")
    s = ConcreteState(2, {"N": 2}, {}, {"V": (1, 1)})
    assert project_state(s, spec)["z1"] == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.data())
def test_projection_partition_law(ot_spec, n, data):
    a = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    v = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    p = project_state(ConcreteState(n, {"N": n}, {}, {"A": a, "V": v}), ot_spec)
    assert sum(p[k] for k in ot_spec.counter_names) == n


# ------------------------------------------------------- simulation checks


def test_ot_simulation_n3(ot_spec, ot_cs):
    r = check_simulation(ot_spec, ot_cs, 3)
    assert r.simulation_holds and r.counterexamples == []
    assert r.concrete_state_count == 216


def test_false_tau_breaks_simulation(ot_spec, ot_cs):
    r = check_simulation(ot_spec, dataclasses.replace(ot_cs, tau0=[]), 3)
    assert not r.simulation_holds
    assert r.counterexamples and r.counterexamples[0]["kind"] == "transition"


def test_no_transitions_vacuous():
    spec = _small("forall i . V'(i) = 0 & V'(i) = 1")
    cs = build_counter_system(spec)
    assert cs.tau0 == []
    r = check_simulation(spec, cs, 3)
    assert r.simulation_holds
    assert check_strongest(spec, cs, 3).strongest_holds


@pytest.mark.parametrize("n", [3, 4])
def test_ot_strongest(ot_spec, ot_cs, n):
    r = check_strongest(ot_spec, ot_cs, n)
    assert r.strongest_holds, r.to_text()
    assert bool(r.counterexamples) == (not r.strongest_holds)


def _decrease_drops(cs):
    """Every weakening of one disjunct by dropping a ``z' <= z`` conjunct."""
    for i, d in enumerate(cs.tau0):
        for c in d.constraints:
            ks = dict(c.expr.terms)
            if c.kind == LE and len(ks) == 2 and c.expr.const == 0 and sorted(ks.values()) == [-1, 1]:
                p = [k for k, a in ks.items() if a == 1][0]
                q = [k for k, a in ks.items() if a == -1][0]
                if p.primed and not q.primed and p.name == q.name:
                    weaker = LinearConstraintSet.make([x for x in d.constraints if x is not c])
                    yield dataclasses.replace(cs, tau0=cs.tau0[:i] + [weaker] + cs.tau0[i + 1:])


def test_weakened_tau_not_strongest(ot_spec, ot_cs):
    # some conjuncts are implied by the rest; take the first drop that changes tau0 at N = 3
    from counterabs.oracle import pair_grid_chunks
    from counterabs.predicate import LinearPredicate

    names = list(ot_cs.counters)
    tau = LinearPredicate.from_system(ot_cs, "tau0")
    mutated = next(m for m in _decrease_drops(ot_cs)
                   if not check_equiv_bounded(tau, LinearPredicate.from_system(m, "tau0"),
                                              pair_grid_chunks(names, 3, {"N": 3})))
    r = check_strongest(ot_spec, mutated, 3)
    assert not r.strongest_holds
    assert any(c["kind"] == "transition" and c["direction"] == "strongest" for c in r.counterexamples)
    # the weaker abstraction still simulates
    assert check_simulation(ot_spec, mutated, 3).simulation_holds


def test_report_json(ot_spec, ot_cs):
    r = check_simulation(ot_spec, ot_cs, 3)
    obj = r.to_json_obj()
    assert obj["checkedN"] == 3 and obj["simulationHolds"] is True and obj["strongestHolds"] is None


# ------------------------------------------------------------ reachability

AGREEMENT = "z00 + z01 > 0 & z10 + z11 > 0"


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_ot_agreement_unreachable(ot_spec, ot_cs, n):
    r = bounded_reach(ot_cs, n, resolve_formula(ot_spec, AGREEMENT))
    assert not r and r.explored > 0


def test_ot_weak_validity(ot_spec, ot_cs):
    init = resolve_formula(ot_spec, "zb0 = N")
    assert not bounded_reach(ot_cs, 4, resolve_formula(ot_spec, "z10 + z11 > 0"), init=init)


def test_reach_initial_bad(ot_spec, ot_cs):
    r = bounded_reach(ot_cs, 3, resolve_formula(ot_spec, "z00 = 0 & zb0 + zb1 = N"))
    assert r and len(r.trace) == 1


def test_buggy_trace_replays(ot_spec, ot_buggy_cs):
    from counterabs.predicate import LinearPredicate

    # at N = 3 no two values can both exceed N div 3 copies
    assert not bounded_reach(ot_buggy_cs, 3, resolve_formula(ot_spec, AGREEMENT))
    r = bounded_reach(ot_buggy_cs, 4, resolve_formula(ot_spec, AGREEMENT))
    assert r and len(r.trace) == 2
    tau = LinearPredicate.from_system(ot_buggy_cs, "tau0")
    for a, b in zip(r.trace, r.trace[1:]):
        row = dict(a)
        row.update({k + "'": v for k, v in b.items() if k != "N"})
        assert tau.holds(row)


# ------------------------------------------------------------ equivalence


def test_equiv_commutes():
    from counterabs.frontend import parse_formula

    g = counter_grid(["p", "q"], 4)
    assert check_equiv_bounded(parse_formula("p > 1 & q < 2"), parse_formula("q < 2 & p > 1"), g)


def test_equiv_counterexample():
    from counterabs.frontend import parse_formula

    g = counter_grid(["z", "w"], 3)
    r = check_equiv_bounded(parse_formula("z >= 0"), parse_formula("z > 0"), g)
    assert not r and r.counterexample["z"] == 0
