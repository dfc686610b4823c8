"""Explicit-state ground truth at a fixed process count.

The concrete semantics is enumerated directly from the specification: states
are total array valuations (plus integer variables and parameters), and a
transition ``(s, s')`` satisfies ``forall x . OR_i tau_i(x)``.  Because every
case reads arrays only at its bound variable, a transition factors across
processes once the shared ground quantities are fixed: cardinalities over
``s`` are computed, while primed integer variables and cardinalities over
``s'`` are guessed and checked afterwards.  Projections of successor states
are then a Minkowski sum of per-process contributions.

Arrays read only primed (receive buffers, say) are not part of the state;
their primed values are per-transition choices.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .errors import StateBudgetExceeded
from .kernels import compositions  # noqa: F401  (re-exported for grid builders)
from .logic.evaluate import ConcreteState, eval_term, evaluate
from .logic.syntax import (
    ArraySym, Card, IntVar, Local, Num, disj, free_symbols, iter_terms, map_terms,
    rename_proc_var,
)
from .predicate import LinearPredicate

DEFAULT_STATE_BUDGET = 10**7
MAX_COUNTEREXAMPLES = 20


# ------------------------------------------------------------------ bounds


@dataclass(frozen=True)
class Bounds:
    """Finite domains: ``arith`` for arithmetic arrays, per-name value tuples otherwise."""

    arith: tuple
    ints: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def describe(self):
        return {
            "arithmetic_arrays": list(self.arith),
            "intvars": {k: list(v) for k, v in sorted(self.ints.items())},
            "params": {k: list(v) for k, v in sorted(self.params.items())},
        }


def default_bounds(spec, n):
    """Arithmetic arrays in ``[0, N]``; integer variables over ``{0, 1}`` and guard numerals."""
    numerals = {0, 1}
    for f in [spec.phi(), spec.iota(), spec.tau(), spec.unsafe]:
        for t in iter_terms(f):
            if isinstance(t, Num):
                numerals.add(t.value)
    ints = {}
    for v in spec.intvars:
        ints[v] = (0, 1) if v in spec.bool_vars else tuple(sorted(numerals))
    params = {p: ((n,) if p == "N" else tuple(range(n + 1))) for p in spec.params}
    return Bounds((0, n), ints, params)


def adequacy_note(spec):
    """Why the arithmetic bound ``[0, N]`` suffices, or a warning when it may not."""
    if not spec.arithmetic:
        return "no arithmetic arrays"
    return (
        "arithmetic arrays range over [0, N]; adequate when their reads are compared "
        "only with cardinalities and N-linear thresholds (not checked mechanically)"
    )


# ------------------------------------------------------------- structure


def _arrays_read(f, primed):
    return {s.name for s in free_symbols(f) if isinstance(s, ArraySym) and s.primed == primed}


def state_arrays(spec):
    """Array-ids that belong to the state vector (read unprimed somewhere)."""
    used = set()
    for f in [spec.phi(), spec.iota(), spec.tau()]:
        used |= _arrays_read(f, False)
    for c in spec.counters:
        used |= _arrays_read(c.body, False)
    return tuple(a.name for a in spec.arrays if a.name in used)


def trimmed_arrays(spec):
    """Arrays read only primed in the transition: local choices, not state."""
    st = set(state_arrays(spec))
    return tuple(a for a in sorted(_arrays_read(spec.tau(), True)) if a not in st)


def projection_names(spec):
    return tuple(spec.params) + tuple(spec.intvars) + tuple(spec.counter_names)


def _domain(spec, name, bounds):
    a = spec.array(name)
    if a.enumerated:
        return range(spec.sort_size(name))
    lo, hi = bounds.arith
    return range(lo, hi + 1)


# ------------------------------------------------------------------ states


def _globals(spec, bounds):
    names_p = tuple(spec.params)
    names_i = tuple(spec.intvars)
    for pv in itertools.product(*(bounds.params[p] for p in names_p)):
        for iv in itertools.product(*(bounds.ints[v] for v in names_i)):
            yield dict(zip(names_p, pv)), dict(zip(names_i, iv))


def enumerate_states(spec, n, bounds=None, budget=DEFAULT_STATE_BUDGET, formula=None):
    """All states at ``N = n`` within bounds satisfying ``formula`` (default: the invariant)."""
    bounds = bounds or default_bounds(spec, n)
    arrays = state_arrays(spec)
    per_proc = [list(_domain(spec, a, bounds)) for a in arrays]
    size = 1
    for d in per_proc:
        size *= len(d) ** n
    for p in spec.params:
        size *= len(bounds.params[p])
    for v in spec.intvars:
        size *= len(bounds.ints[v])
    if size > budget:
        raise StateBudgetExceeded(f"{size} candidate states at N={n} exceed the budget of {budget}")
    f = spec.phi() if formula is None else formula
    out = []
    proc_values = list(itertools.product(*per_proc))
    for params, ints in _globals(spec, bounds):
        for combo in itertools.product(proc_values, repeat=n):
            arrs = {a: tuple(pv[j] for pv in combo) for j, a in enumerate(arrays)}
            s = ConcreteState(n, params, ints, arrs)
            if evaluate(f, s):
                out.append(s)
    return out


def project_state(s, spec):
    """``{name: value}`` over parameters, integer variables and counters."""
    out = dict(s.params)
    out.update(s.ints)
    for c in spec.counters:
        out[c.name] = eval_term(c.card(), s)
    return out


def _key(d, names):
    return tuple(d[k] for k in names)


# ------------------------------------------------------------- transitions


class _TransitionModel:
    """Per-process factorization of the transition formula."""

    def __init__(self, spec, n, bounds):
        self.spec = spec
        self.n = n
        self.bounds = bounds
        self.arrays = state_arrays(spec)
        self.trimmed = trimmed_arrays(spec)
        var = spec.trans[0].var
        self.var = var
        body = disj(*(rename_proc_var(c.body, c.var, var) for c in spec.trans))
        self.uc, self.pc = [], []

        def lift(t):
            if isinstance(t, Card):
                primed = any(isinstance(s, ArraySym) and s.primed for s in free_symbols(t))
                bucket, tag = (self.pc, "_pc") if primed else (self.uc, "_uc")
                for j, (card, _) in enumerate(bucket):
                    if card == t:
                        return IntVar(f"{tag}{j}")
                bucket.append((t, None))
                return IntVar(f"{tag}{len(bucket) - 1}")
            return t

        self.body = map_terms(body, lift)
        self.pc = [c for c, _ in self.pc]
        self.uc = [c for c, _ in self.uc]
        self.locals = list(spec.derived)
        self.primed_ints = tuple(spec.intvars)
        self.cand_state = [list(_domain(spec, a, bounds)) for a in self.arrays]
        self.cand_trim = [list(_domain(spec, a, bounds)) for a in self.trimmed]
        self.cache = {}
        self.contrib_cache = {}

    def guesses(self):
        ints = [self.bounds.ints[v] for v in self.primed_ints]
        cards = [range(self.n + 1)] * len(self.pc)
        for iv in itertools.product(*ints):
            for cv in itertools.product(*cards):
                yield dict(zip(self.primed_ints, iv)), cv

    def _env_base(self, s, ints_p, cards_p):
        env = {}
        for j, c in enumerate(self.uc):
            env[IntVar(f"_uc{j}")] = eval_term(c, s)
        for j, v in enumerate(cards_p):
            env[IntVar(f"_pc{j}")] = v
        for v, val in ints_p.items():
            env[IntVar(v, True)] = val
        nxt = ConcreteState(s.n, s.params, ints_p, {})
        for d in self.locals:
            env[Local(d.name)] = eval_term(d.term, s, env, nxt) // d.divisor
        return env

    def options(self, s, i, env, ints_p):
        """Primed state-array values for process ``i`` allowed by the transition."""
        local = tuple(s.arrays[a][i] for a in self.arrays)
        key = (tuple(sorted((str(k), v) for k, v in env.items())), tuple(sorted(s.params.items())),
               tuple(sorted(s.ints.items())), local)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        cur = ConcreteState(1, s.params, s.ints, {a: (s.arrays[a][i],) for a in s.arrays})
        e = dict(env)
        e[self.var] = 0
        out = []
        for vals in itertools.product(*self.cand_state):
            ok = False
            for tv in itertools.product(*self.cand_trim):
                arrs = dict(zip(self.arrays, ((v,) for v in vals)))
                arrs.update(zip(self.trimmed, ((v,) for v in tv)))
                nxt = ConcreteState(1, s.params, ints_p, arrs)
                if evaluate(self.body, cur, e, nxt):
                    ok = True
                    break
            if ok:
                out.append(vals)
        self.cache[key] = out
        return out

    def contribution(self, s, i, vals):
        """(counter indicators of the new process state, primed-card indicators)."""
        local = tuple(s.arrays[a][i] for a in self.arrays)
        key = (local, vals)
        hit = self.contrib_cache.get(key)
        if hit is not None:
            return hit
        new = ConcreteState(1, {}, {}, {a: (v,) for a, v in zip(self.arrays, vals)})
        cur = ConcreteState(1, {}, {}, {a: (v,) for a, v in zip(self.arrays, local)})
        counters = tuple(int(eval_term(c.card(), new)) for c in self.spec.counters)
        cards = tuple(int(eval_term(c, cur, {}, new)) for c in self.pc)
        res = counters + cards
        self.contrib_cache[key] = res
        return res


def enumerate_transitions(spec, n, bounds=None, budget=DEFAULT_STATE_BUDGET, states=None):
    """All concrete pairs ``(s, s')`` with ``s`` in the invariant; yields lazily."""
    bounds = bounds or default_bounds(spec, n)
    model = _TransitionModel(spec, n, bounds)
    states = enumerate_states(spec, n, bounds, budget) if states is None else states
    produced = 0
    for s in states:
        for ints_p, cards_p in model.guesses():
            env = model._env_base(s, ints_p, cards_p)
            opts = [model.options(s, i, env, ints_p) for i in range(n)]
            for combo in itertools.product(*opts):
                arrs = {a: tuple(v[j] for v in combo) for j, a in enumerate(model.arrays)}
                s2 = ConcreteState(n, s.params, ints_p, arrs)
                if any(eval_term(c, s, {}, s2) != v for c, v in zip(model.pc, cards_p)):
                    continue
                produced += 1
                if produced > budget:
                    raise StateBudgetExceeded(f"more than {budget} transitions at N={n}")
                yield s, s2


def projected_successors(spec, n, bounds=None, states=None, budget=DEFAULT_STATE_BUDGET):
    """``{source projection: Counter(target projection -> number of transitions)}``.

    Exact: computed by summing per-process contributions, which is equivalent
    to projecting every enumerated transition.
    """
    bounds = bounds or default_bounds(spec, n)
    model = _TransitionModel(spec, n, bounds)
    states = enumerate_states(spec, n, bounds, budget) if states is None else states
    names = projection_names(spec)
    ncnt = len(spec.counters)
    out = {}
    for s in states:
        src = _key(project_state(s, spec), names)
        acc = out.setdefault(src, Counter())
        for ints_p, cards_p in model.guesses():
            env = model._env_base(s, ints_p, cards_p)
            dp = Counter({(0,) * (ncnt + len(model.pc)): 1})
            for i in range(n):
                opts = model.options(s, i, env, ints_p)
                if not opts:
                    dp = Counter()
                    break
                contrib = Counter(model.contribution(s, i, v) for v in opts)
                nxt = Counter()
                for vec, ways in dp.items():
                    for c, m in contrib.items():
                        nxt[tuple(a + b for a, b in zip(vec, c))] += ways * m
                dp = nxt
            for vec, ways in dp.items():
                if tuple(vec[ncnt:]) != tuple(cards_p):
                    continue
                tgt = tuple(s.params[p] for p in spec.params) + tuple(ints_p[v] for v in spec.intvars) + vec[:ncnt]
                acc[tgt] += ways
    return out


def realizable_tuples(spec, n, bounds=None):
    """Projections of every state in bounds (ignoring the invariant), sorted."""
    bounds = bounds or default_bounds(spec, n)
    arrays = state_arrays(spec)
    doms = [list(_domain(spec, a, bounds)) for a in arrays]
    contribs = set()
    for vals in itertools.product(*doms):
        st = ConcreteState(1, {}, {}, {a: (v,) for a, v in zip(arrays, vals)})
        contribs.add(tuple(int(eval_term(c.card(), st)) for c in spec.counters))
    sums = {(0,) * len(spec.counters)}
    for _ in range(n):
        sums = {tuple(a + b for a, b in zip(v, c)) for v in sums for c in contribs}
    out = []
    for params, ints in _globals(spec, bounds):
        head = tuple(params[p] for p in spec.params) + tuple(ints[v] for v in spec.intvars)
        out.extend(head + v for v in sums)
    return sorted(out)


# ----------------------------------------------------------------- reports


@dataclass
class SimulationReport:
    checked_n: int
    concrete_state_count: int = 0
    concrete_transition_count: int = 0
    simulation_holds: bool | None = None
    strongest_holds: bool | None = None
    skipped_tuples: int = 0
    counterexamples: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json_obj(self):
        return {
            "checkedN": self.checked_n,
            "counts": {"states": self.concrete_state_count, "transitions": self.concrete_transition_count},
            "simulationHolds": self.simulation_holds,
            "strongestHolds": self.strongest_holds,
            "skippedTuples": self.skipped_tuples,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    def to_text(self):
        def flag(v):
            return "not checked" if v is None else ("holds" if v else "FAILS")

        lines = [
            f"N = {self.checked_n}: {self.concrete_state_count} states, "
            f"{self.concrete_transition_count} transitions",
            f"  simulation: {flag(self.simulation_holds)}",
            f"  strongest:  {flag(self.strongest_holds)}",
        ]
        if self.skipped_tuples:
            lines.append(f"  skipped abstract tuples (not realizable at N={self.checked_n}): {self.skipped_tuples}")
        for cx in self.counterexamples:
            lines.append("  counterexample: " + json.dumps(cx, sort_keys=True))
        for note in self.notes:
            lines.append("  note: " + note)
        return "\n".join(lines)


def _grid(rows, names, primed_names=()):
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(names))
    return {k: arr[:, j] for j, k in enumerate(names)}


def _pair_grid(pairs, names, params):
    """Grid over ``(source, target)`` tuples; parameters are never primed."""
    src = np.array([p[0] for p in pairs], dtype=np.int64).reshape(len(pairs), len(names))
    tgt = np.array([p[1] for p in pairs], dtype=np.int64).reshape(len(pairs), len(names))
    g = {}
    for j, k in enumerate(names):
        g[k] = src[:, j]
        if k not in params:
            g[k + "'"] = tgt[:, j]
    return g


def _named(row, names):
    return {k: int(v) for k, v in zip(names, row)}


def check_simulation(spec, cs, n, bounds=None, report=None, budget=DEFAULT_STATE_BUDGET):
    """Projected concrete behaviour must satisfy phi0, iota0 and tau0."""
    bounds = bounds or default_bounds(spec, n)
    report = report or SimulationReport(n)
    names = projection_names(spec)
    phi = LinearPredicate.from_system(cs, "phi0")
    iota = LinearPredicate.from_system(cs, "iota0")
    tau = LinearPredicate.from_system(cs, "tau0")
    states = enumerate_states(spec, n, bounds, budget)
    report.concrete_state_count = len(states)
    cex = []

    proj = sorted({_key(project_state(s, spec), names) for s in states})
    if proj:
        m = phi.mask(_grid(proj, names))
        for row in np.array(proj)[~m][:MAX_COUNTEREXAMPLES]:
            cex.append({"kind": "phi", "direction": "simulation", "state": _named(row, names)})
    init = [s for s in states if evaluate(spec.iota(), s)]
    proj_i = sorted({_key(project_state(s, spec), names) for s in init})
    if proj_i:
        m = iota.mask(_grid(proj_i, names))
        for row in np.array(proj_i)[~m][:MAX_COUNTEREXAMPLES]:
            cex.append({"kind": "init", "direction": "simulation", "state": _named(row, names)})

    succ = projected_successors(spec, n, bounds, states, budget)
    pairs = [(a, b) for a, tgts in succ.items() for b in tgts]
    report.concrete_transition_count = sum(sum(t.values()) for t in succ.values())
    if pairs:
        m = tau.mask(_pair_grid(pairs, names, set(spec.params)))
        for k in np.nonzero(~m)[0][:MAX_COUNTEREXAMPLES]:
            a, b = pairs[k]
            cex.append({"kind": "transition", "direction": "simulation",
                        "source": _named(a, names), "target": _named(b, names)})
    report.counterexamples.extend(cex)
    report.simulation_holds = not cex
    return report


def check_strongest(spec, cs, n, bounds=None, report=None, box_limit=2_000_000, budget=DEFAULT_STATE_BUDGET):
    """Every realizable abstract state/pair accepted by the abstraction has a concrete witness."""
    bounds = bounds or default_bounds(spec, n)
    report = report or SimulationReport(n)
    names = projection_names(spec)
    phi = LinearPredicate.from_system(cs, "phi0")
    iota = LinearPredicate.from_system(cs, "iota0")
    tau = LinearPredicate.from_system(cs, "tau0")
    states = enumerate_states(spec, n, bounds, budget)
    report.concrete_state_count = len(states)
    real = realizable_tuples(spec, n, bounds)
    cex = []

    proj = {_key(project_state(s, spec), names) for s in states}
    proj_i = {_key(project_state(s, spec), names) for s in states if evaluate(spec.iota(), s)}
    g = _grid(real, names)
    for pred, have, kind in ((phi, proj, "phi"), (iota, proj_i, "init")):
        m = pred.mask(g)
        for k in np.nonzero(m)[0]:
            if real[k] not in have:
                cex.append({"kind": kind, "direction": "strongest", "state": _named(real[k], names)})

    succ = projected_successors(spec, n, bounds, states, budget)
    report.concrete_transition_count = sum(sum(t.values()) for t in succ.values())
    params = set(spec.params)
    head = len(spec.params)
    for a in real:
        # only targets sharing the parameter values
        tg = [b for b in real if b[:head] == a[:head]]
        if not tg:
            continue
        m = tau.mask(_pair_grid([(a, b) for b in tg], names, params))
        have = succ.get(a, {})
        for k in np.nonzero(m)[0]:
            if tg[k] not in have:
                cex.append({"kind": "transition", "direction": "strongest",
                            "source": _named(a, names), "target": _named(tg[k], names)})
                if len(cex) >= MAX_COUNTEREXAMPLES:
                    break
        if len(cex) >= MAX_COUNTEREXAMPLES:
            break

    report.skipped_tuples = _count_unrealizable(spec, tau, real, names, n, bounds, box_limit, report)
    report.counterexamples.extend(cex)
    report.strongest_holds = not cex
    return report


def _count_unrealizable(spec, tau, real, names, n, bounds, box_limit, report):
    """Abstract pairs with a realizable source accepted by tau0 whose target is not realizable."""
    ncnt = len(spec.counters)
    box_size = (n + 1) ** ncnt
    for v in spec.intvars:
        box_size *= len(bounds.ints[v])
    if box_size * max(1, len(real)) > box_limit * 50 or box_size > box_limit:
        report.notes.append("box of abstract targets too large; unrealizable tuples not counted")
        return 0
    realset = set(real)
    head = len(spec.params)
    params = set(spec.params)
    ints_dom = [bounds.ints[v] for v in spec.intvars]
    box_tail = [iv + cv for iv in itertools.product(*ints_dom)
                for cv in itertools.product(range(n + 1), repeat=ncnt)]
    skipped = 0
    for a in real:
        targets = [a[:head] + t for t in box_tail]
        m = tau.mask(_pair_grid([(a, b) for b in targets], names, params))
        skipped += sum(1 for k in np.nonzero(m)[0] if targets[k] not in realset)
    return skipped


# ----------------------------------------------------------- reachability


@dataclass
class ReachResult:
    reachable: bool
    trace: list = field(default_factory=list)  # states as {name: value}, initial first
    explored: int = 0

    def __bool__(self):
        return self.reachable


def _as_predicate(x):
    if x is None or isinstance(x, LinearPredicate):
        return x
    return LinearPredicate.from_formula(x)


def abstract_box(cs, n, int_domains=None, extra_params=None):
    """All abstract states with counters in ``[0, n]``, filtered later by the caller."""
    int_domains = int_domains or {}
    names = cs.state_names
    doms = []
    for k in names:
        if k in cs.params:
            doms.append((n,) if k == "N" else tuple((extra_params or {}).get(k, range(n + 1))))
        elif k in cs.intvars:
            doms.append(tuple(int_domains.get(k, (0, 1))))
        else:
            doms.append(tuple(range(n + 1)))
    return [tuple(r) for r in itertools.product(*doms)]


def bounded_reach(cs, n, bad, init=None, domain=None, budget=DEFAULT_STATE_BUDGET):
    """Breadth-first search over abstract states from ``phi0 & iota0 (& init)`` through tau0.

    ``domain`` lists the abstract states considered (tuples in ``cs.state_names``
    order); the default is the box with every counter in ``[0, n]``.  Returns a
    minimal-length witness trace when a ``bad`` state is reachable.
    """
    names = tuple(cs.state_names)
    params = set(cs.params)
    phi = LinearPredicate.from_system(cs, "phi0")
    iota = LinearPredicate.from_system(cs, "iota0")
    tau = LinearPredicate.from_system(cs, "tau0")
    bad = _as_predicate(bad)
    init = _as_predicate(init)
    dom = domain if domain is not None else abstract_box(cs, n)
    if len(dom) > budget:
        raise StateBudgetExceeded(f"{len(dom)} abstract states exceed the budget of {budget}")
    dom = [tuple(d) for d in dom]
    if not dom:
        return ReachResult(False)
    g = _grid(dom, names)
    inv = phi.mask(g)
    start = inv & iota.mask(g)
    if init is not None:
        start &= init.mask(g)
    is_bad = bad.mask(g)
    targets = np.nonzero(inv & _target_filter(tau, g, names, params))[0]
    parent = {}
    queue = deque()
    for k in np.nonzero(start)[0]:
        parent[int(k)] = None
        queue.append(int(k))
    explored = 0
    while queue:
        k = queue.popleft()
        explored += 1
        if is_bad[k]:
            trace = []
            while k is not None:
                trace.append(_named(dom[k], names))
                k = parent[k]
            return ReachResult(True, trace[::-1], explored)
        if not len(targets):
            continue
        pair = {}
        for j, name in enumerate(names):
            pair[name] = np.full(len(targets), dom[k][j], dtype=np.int64)
            if name not in params:
                pair[name + "'"] = g[name][targets]
        m = tau.mask(pair)
        for t in targets[m]:
            t = int(t)
            if t not in parent:
                parent[t] = k
                queue.append(t)
    return ReachResult(False, [], explored)


def _target_filter(tau, g, names, params):
    """Rows that can be a tau0 target: each disjunct's target-only constraints hold."""
    from .presburger import LinearConstraintSet

    shifted = {}
    for k in names:
        shifted[k + "'" if k not in params else k] = g[k]
    parts = []
    local_names = {str(loc.name) for loc, _, _ in tau.local_defs}
    for d in tau.disjuncts:
        keep = []
        for c in d.constraints:
            ok = True
            for key in c.keys():
                if isinstance(key, IntVar) and not key.primed:
                    ok = False
                elif isinstance(key, Local) and key.name in local_names:
                    ok = False
            if ok:
                keep.append(c)
        parts.append(LinearConstraintSet.make(keep))
    pred = LinearPredicate(parts)
    length = len(next(iter(g.values())))
    if not pred.symbols() <= set(shifted):
        return np.ones(length, dtype=np.bool_)
    return pred.mask(shifted)


# ------------------------------------------------------------ equivalence


@dataclass
class EquivResult:
    equivalent: bool
    counterexample: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.equivalent


def check_equiv_bounded(fa, fb, grid):
    """Compare two predicates on every row of ``grid``.

    ``grid`` is a column mapping or an iterable of column mappings (chunks).
    Formulas are accepted too and compiled on the fly.
    """
    fa, fb = _as_predicate(fa), _as_predicate(fb)
    chunks = [grid] if isinstance(grid, dict) else grid
    checked = 0
    for chunk in chunks:
        ma, mb = fa.mask(chunk), fb.mask(chunk)
        diff = np.nonzero(ma != mb)[0]
        if len(diff):
            k = int(diff[0])
            point = {name: int(np.asarray(col)[k]) for name, col in chunk.items()}
            return EquivResult(False, point, checked + k + 1)
        checked += len(ma)
    return EquivResult(True, None, checked)


def check_implies_bounded(fa, fb, grid):
    """``fa`` implies ``fb`` on every grid row; same result type as the equivalence check."""
    fa, fb = _as_predicate(fa), _as_predicate(fb)
    chunks = [grid] if isinstance(grid, dict) else grid
    checked = 0
    for chunk in chunks:
        ma, mb = fa.mask(chunk), fb.mask(chunk)
        bad = np.nonzero(ma & ~mb)[0]
        if len(bad):
            k = int(bad[0])
            point = {name: int(np.asarray(col)[k]) for name, col in chunk.items()}
            return EquivResult(False, point, checked + k + 1)
        checked += len(ma)
    return EquivResult(True, None, checked)


def counter_grid(names, n, extra=None):
    """Columns over all ``len(names)``-tuples summing to ``n`` plus constant columns."""
    rows = compositions(n, len(names))
    g = {k: rows[:, j] for j, k in enumerate(names)}
    for k, v in (extra or {}).items():
        g[k] = np.full(len(rows), v, dtype=np.int64)
    return g


def pair_grid_chunks(names, n, extra=None, chunk_rows=1 << 18):
    """Chunks over ordered pairs of ``n``-compositions; targets get primed column names."""
    rows = compositions(n, len(names))
    m = len(rows)
    per = max(1, chunk_rows // max(m, 1))
    for lo in range(0, m, per):
        src = np.repeat(rows[lo:lo + per], m, axis=0)
        tgt = np.tile(rows, (min(per, m - lo), 1))
        g = {}
        for j, k in enumerate(names):
            g[k] = src[:, j]
            g[k + "'"] = tgt[:, j]
        for k, v in (extra or {}).items():
            g[k] = np.full(len(src), v, dtype=np.int64)
        yield g


__all__ = [
    "Bounds", "EquivResult", "ReachResult", "SimulationReport", "abstract_box", "adequacy_note",
    "bounded_reach", "check_equiv_bounded", "check_implies_bounded", "check_simulation",
    "check_strongest", "counter_grid", "default_bounds", "enumerate_states",
    "enumerate_transitions", "pair_grid_chunks", "project_state", "projected_successors",
    "realizable_tuples", "state_arrays", "trimmed_arrays",
]
