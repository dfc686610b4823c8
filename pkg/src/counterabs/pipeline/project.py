"""Steps (iii)-(iv): encode over cells and project the cells away."""
from __future__ import annotations

from ..presburger import LinearConstraintSet, Policy, eliminate
from .cells import counters_as_cell_sums, data_arrays, encode_forall_data


def scope_definitions(defs, cs):
    """Counter definitions whose arrays all lie inside the cell space's scope."""
    in_scope = set(cs.arrays)
    return [(sym, body) for sym, body in defs if set(data_arrays(body)) <= in_scope]


def project_out_cells(constraints, cs, policy=None, stats=None):
    """Eliminate every cell symbol from ``constraints``; returns ``(disjunction, exact)``."""
    base = LinearConstraintSet.make(constraints)
    if base.is_false:
        return [], True
    return eliminate(cs.symbols(), [base], policy or Policy(), stats)


class ThetaProjector:
    """Caches ``exists cells . (counter sums & forall k theta)`` per satisfying-cell set."""

    def __init__(self, defs, cs, policy=None, stats=None):
        self.cs = cs
        self.defs = scope_definitions(defs, cs)
        self.sums = counters_as_cell_sums(self.defs, cs)
        self.policy = policy or Policy()
        self.stats = stats
        self.cache = {}
        self.exact = True

    def project(self, theta):
        key = frozenset(c.index for c in self.cs.satisfying(theta))
        if key not in self.cache:
            cons = self.sums + encode_forall_data(theta, self.cs)
            res, ok = project_out_cells(cons, self.cs, self.policy, self.stats)
            self.exact = self.exact and ok
            self.cache[key] = res
        return self.cache[key]
