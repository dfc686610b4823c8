"""Assembly of the counter abstraction ``(phi0, iota0, tau0)`` and its JSON form."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from ..frontend.desugar import definition_atoms, derived_constraints
from ..frontend.model import Derived
from ..logic.linear import Lin, atom_alternatives, le0
from ..logic.syntax import (
    And, Cmp, Cong, IntVar, Local, Not, Param, conj, map_terms, rename_proc_var, show,
)
from ..presburger import TRUE_SET, LinearConstraintSet, Policy, QEStats, eliminate
from .assign import DEFAULT_ATOM_BUDGET, _feasible, make_parts, split_assignments
from .cells import DEFAULT_CELL_BUDGET, INIT_SCOPE, TRANS_SCOPE, build_cells
from .project import ThetaProjector
from .skolem import CounterMatcher, nonneg_trivial, skolem_disjuncts, strip_definitions

log = logging.getLogger(__name__)


@dataclass
class BuildOptions:
    relax: bool = False
    size_limit: int = 5000
    atom_budget: int = DEFAULT_ATOM_BUDGET
    cell_budget: int = DEFAULT_CELL_BUDGET

    def policy(self):
        return Policy("relax" if self.relax else "exact", self.size_limit)


@dataclass
class CounterSystem:
    """Quantifier-free abstraction over counters, integer variables and parameters.

    ``phi0``, ``iota0`` and ``tau0`` are disjunctions (lists) of
    ``LinearConstraintSet``.  ``locals`` lists floor-division witnesses that
    may occur in any disjunct together with their defining bounds.
    """

    counters: tuple
    counter_defs: dict
    intvars: tuple
    params: tuple
    locals: tuple = ()  # ((name, term string, divisor), ...)
    phi0: list = field(default_factory=list)
    iota0: list = field(default_factory=list)
    tau0: list = field(default_factory=list)
    exact: bool = True
    provenance: dict = field(default_factory=dict)
    auto_counters: tuple = ()
    stats: dict = field(default_factory=dict)
    bool_vars: tuple = ()
    source_hash: str = ""

    @property
    def state_names(self):
        """Argument order of the invariant: params, integer variables, counters."""
        return tuple(self.params) + tuple(self.intvars) + tuple(self.counters)

    def to_json_obj(self):
        def dis(xs):
            return [s.strings() for s in xs]

        return {
            "counters": [{"name": n, "definition": self.counter_defs[n]} for n in self.counters],
            "auto_counters": [{"name": n, "definition": d} for n, d in self.auto_counters],
            "intvars": list(self.intvars),
            "bool_intvars": list(self.bool_vars),
            "params": list(self.params),
            "locals": [{"name": n, "definition": f"({t}) div {d}"} for n, t, d in self.locals],
            "phi0": dis(self.phi0),
            "iota0": dis(self.iota0),
            "tau0": dis(self.tau0),
            "exact": self.exact,
            "provenance": self.provenance,
            "source_hash": self.source_hash,
            "stats": {k: v for k, v in sorted(self.stats.items()) if not k.endswith("_ms")},
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        from ..frontend.parser import parse_formula

        obj = json.loads(text) if isinstance(text, str) else text
        params = tuple(obj["params"])
        local_names = {d["name"] for d in obj.get("locals", [])}
        counters = tuple(d["name"] for d in obj["counters"])

        def resolve(t):
            if isinstance(t, IntVar):
                if t.name in params:
                    return Param(t.name)
                if t.name in local_names:
                    return Local(t.name)
            return t

        def dis(rows):
            out = []
            for row in rows:
                cons = []
                for atom in row:
                    f = map_terms(parse_formula(atom), resolve)
                    cons.extend(_constraints_of(f))
                out.append(LinearConstraintSet.make(cons))
            return out

        locals_ = []
        for d in obj.get("locals", []):
            term_text, _, div = d["definition"].rpartition(" div ")
            locals_.append((d["name"], term_text.strip()[1:-1], int(div)))
        return cls(
            counters=counters,
            counter_defs={d["name"]: d["definition"] for d in obj["counters"]},
            intvars=tuple(obj["intvars"]),
            params=params,
            locals=tuple(locals_),
            phi0=dis(obj["phi0"]),
            iota0=dis(obj["iota0"]),
            tau0=dis(obj["tau0"]),
            exact=bool(obj.get("exact", True)),
            provenance=obj.get("provenance", {}),
            auto_counters=tuple((d["name"], d["definition"]) for d in obj.get("auto_counters", [])),
            stats=obj.get("stats", {}),
            bool_vars=tuple(obj.get("bool_intvars", [])),
            source_hash=obj.get("source_hash", ""),
        )

    def local_terms(self):
        """``[(Local, operand term, divisor)]`` for every witness."""
        from ..frontend.parser import parse_formula

        def resolve(t):
            return Param(t.name) if isinstance(t, IntVar) and t.name in self.params else t

        return [
            (Local(name), map_terms(parse_formula(f"{text} = 0").left, resolve), d)
            for name, text, d in self.locals
        ]

    def local_constraints(self):
        """Defining bounds of all witnesses as constraints."""
        out = []
        for loc, u, d in self.local_terms():
            out.extend(_constraints_of(derived_constraints(Derived(loc.name, u, d))))
        return out


def _constraints_of(f):
    """Constraints of a conjunction of positive arithmetic atoms."""
    args = f.args if isinstance(f, And) else (f,)
    out = []
    for a in args:
        if isinstance(a, (Cmp, Cong)):
            [c] = atom_alternatives(a, True)
        elif isinstance(a, Not) and isinstance(a.arg, (Cmp, Cong)):
            alts = atom_alternatives(a.arg, False)
            if len(alts) != 1:
                raise ValueError(f"disjunctive literal in a conjunction: {show(a)}")
            c = alts[0]
        else:
            raise ValueError(f"not an arithmetic literal: {show(a)}")
        if c is True:
            continue
        out.append(c)
    return out


# ---------------------------------------------------------------- builder


class _Builder:
    def __init__(self, spec, options):
        self.spec = spec
        self.options = options
        self.policy = options.policy()
        self.qe = QEStats()
        self.matcher = CounterMatcher(spec)
        self.def_atoms = definition_atoms(spec)
        self.local_facts = []
        for d in spec.derived:
            self.local_facts.extend(_constraints_of(derived_constraints(d)))
        self.exact = True
        self.stats = {"cases": 0, "atoms": 0, "assignments": 0, "cells_init": 0, "cells_trans": 0}
        self.counter_syms = {IntVar(c.name, p) for c in spec.counters for p in (False, True)}

    def nonneg(self, k):
        return k in self.counter_syms or (isinstance(k, IntVar) and k.name.startswith("_zaux"))

    def parts(self, sources):
        pairs = []
        for var, body, src in sources:
            body, _ = strip_definitions(body, self.def_atoms)
            res, ok = skolem_disjuncts(body, var, self.policy, self.qe)
            self.exact = self.exact and ok
            for s, lits in res:
                s = nonneg_trivial(self.matcher.replace_set(s), self.nonneg)
                if s.is_false:
                    continue
                lits = tuple(rename_proc_var(l, var, "k") for l in lits)
                pairs.append((s, lits, src))
        return make_parts(pairs)

    def abstract(self, sources, scope):
        """Counter abstraction of ``forall x . (disjunction of sources)`` over ``scope``."""
        self.stats["cases"] += len(sources)
        parts = self.parts(sources)
        cs = build_cells(self.spec, scope, self.options.cell_budget)
        self.stats["cells_" + scope] = len(cs)
        assignments = split_assignments(parts, self.local_facts, self.options.atom_budget)
        self.stats["atoms"] = max(self.stats["atoms"], len({a for p in parts for a, _ in p.literals}))
        self.stats["assignments"] += len(assignments)
        projector = ThetaProjector(self.matcher.definitions(), cs, self.policy, self.qe)
        aux = [s for s, _ in self.matcher.auto]
        primes = (False, True) if scope == TRANS_SCOPE else (False,)
        domain = [le0(Lin.of(IntVar(c.name, p), -1)) for c in self.spec.counters for p in primes]
        results = {}
        for a in assignments:
            for r in projector.project(a.theta):
                for alt in a.alternatives():
                    base = LinearConstraintSet.make(list(r.constraints) + list(alt.constraints) + self.local_facts)
                    if base.is_false:
                        continue
                    res, ok = eliminate(aux, [base], self.policy, self.qe)
                    self.exact = self.exact and ok
                    for d in res:
                        d = nonneg_trivial(d, self.nonneg)
                        if d.is_false or not _feasible(list(d.constraints)):
                            continue
                        # the emitted problem has no implicit counter domain
                        d = LinearConstraintSet.make(list(d.constraints) + domain)
                        entry = results.setdefault(d, {"cases": set(), "alpha": []})
                        entry["cases"].update(a.sources)
                        alpha = " & ".join(a.alpha_strings()) or "true"
                        if alpha not in entry["alpha"]:
                            entry["alpha"].append(alpha)
        self.exact = self.exact and projector.exact
        ordered = sorted(results, key=lambda s: s.strings())
        prov = [{"cases": sorted(results[s]["cases"]), "alpha": results[s]["alpha"]} for s in ordered]
        return ordered, prov


def build_counter_system(spec, options=None):
    """Strongest counter abstraction of a validated, desugared spec."""
    import time

    options = options or BuildOptions()
    b = _Builder(spec, options)
    t0 = time.perf_counter()

    if spec.invariant:
        phi0, phi_prov = [], []
        for c in spec.invariant:
            ds, pv = b.abstract([(c.var, c.body, c.index)], INIT_SCOPE)
            phi0.extend(ds)
            phi_prov.extend(pv)
        phi0, phi_prov = _merge(phi0, phi_prov)
    else:
        phi0, phi_prov = [TRUE_SET], [{"cases": [], "alpha": ["true"]}]

    iota0, iota_prov = b.abstract([(spec.init.var, spec.init.body, 0)], INIT_SCOPE)

    var = spec.trans[0].var
    trans = [(var, rename_proc_var(c.body, c.var, var), c.index) for c in spec.trans]
    tau0, tau_prov = [], []
    for inv in spec.invariant or (None,):
        # phi_j & (tau_1 | ... | tau_n) as one source per transition case
        if inv is None:
            sources = trans
        else:
            phi = rename_proc_var(inv.body, inv.var, var)
            sources = [(v, conj(phi, body), i) for v, body, i in trans]
        ds, pv = b.abstract(sources, TRANS_SCOPE)
        tau0.extend(ds)
        tau_prov.extend(pv)
    tau0, tau_prov = _merge(tau0, tau_prov)

    stats = dict(b.stats)
    stats.update(b.qe.as_dict())
    stats["disjuncts_phi0"] = len(phi0)
    stats["disjuncts_iota0"] = len(iota0)
    stats["disjuncts_tau0"] = len(tau0)
    stats["build_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return CounterSystem(
        counters=spec.counter_names,
        counter_defs={c.name: show(c.card()) for c in spec.counters},
        intvars=spec.intvars,
        params=spec.params,
        locals=tuple((d.name, show(d.term), d.divisor) for d in spec.derived),
        phi0=phi0,
        iota0=iota0,
        tau0=tau0,
        exact=b.exact,
        provenance={"phi0": phi_prov, "iota0": iota_prov, "tau0": tau_prov},
        auto_counters=tuple((s.name, show(body)) for s, body in b.matcher.auto),
        stats=stats,
        bool_vars=tuple(v for v in spec.intvars if v in spec.bool_vars),
        source_hash=spec.source_hash,
    )


def _merge(sets, prov):
    merged = {}
    for s, p in zip(sets, prov):
        if s in merged:
            e = merged[s]
            e["cases"] = sorted(set(e["cases"]) | set(p["cases"]))
            e["alpha"] = e["alpha"] + [a for a in p["alpha"] if a not in e["alpha"]]
        else:
            merged[s] = {"cases": list(p["cases"]), "alpha": list(p["alpha"])}
    ordered = sorted(merged, key=lambda s: s.strings())
    return ordered, [merged[s] for s in ordered]


__all__ = ["BuildOptions", "CounterSystem", "build_counter_system"]
