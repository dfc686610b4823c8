"""Disjunctions of linear constraint sets evaluated over integer grids.

A grid is a mapping from symbol names (as printed, e.g. ``z00'`` or ``N``)
to equally long integer arrays.  Floor-division witnesses are not grid
columns: each predicate computes its own from their defining terms.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .logic.linear import CONG, EQ, Lin, dnf, key_str, linearize
from .logic.syntax import FloorDiv, IntVar, Local, map_terms
from .presburger import LinearConstraintSet

_KIND = {"le": 0, EQ: 1, CONG: 2}


class LinearPredicate:
    """``exists locals . OR(disjuncts)`` where every local is ``floor(u / d)``."""

    def __init__(self, disjuncts, local_defs=()):
        self.disjuncts = [d for d in disjuncts if not d.is_false]
        self.local_defs = tuple(local_defs)  # ((Local, Lin, divisor), ...)
        self._local_names = {key_str(loc) for loc, _, _ in self.local_defs}
        self._compiled = None

    @classmethod
    def from_formula(cls, f):
        """Compile a quantifier-free arithmetic formula; ``div`` terms become locals."""
        defs = {}

        def lift(t):
            if isinstance(t, FloorDiv):
                key = (t.term, t.divisor)
                if key not in defs:
                    defs[key] = Local(f"_q{len(defs)}")
                return defs[key]
            return t

        g = map_terms(f, lift)
        sets = []
        for cons, data in dnf(g):
            if data:
                raise ValueError("data literals in an arithmetic predicate")
            sets.append(LinearConstraintSet.make(cons))
        local_defs = [(loc, linearize(term), d) for (term, d), loc in defs.items()]
        return cls(sets, local_defs)

    @classmethod
    def from_system(cls, cs, part):
        """One of ``phi0``, ``iota0`` or ``tau0`` of a ``CounterSystem``."""
        defs = [(loc, linearize(u), d) for loc, u, d in cs.local_terms()]
        return cls(getattr(cs, part), defs)

    def symbols(self):
        """Names of the grid columns this predicate reads."""
        out = set()
        for d in self.disjuncts:
            for k in d.keys():
                s = key_str(k)
                if s not in self._local_names:
                    out.add(s)
        for _, u, _ in self.local_defs:
            out.update(key_str(k) for k in u.keys())
        return out

    def primed(self):
        """The predicate over primed copies of its integer variables."""

        def pr(k):
            if isinstance(k, IntVar):
                return IntVar(k.name, True)
            if isinstance(k, Local):
                return Local(k.name + "'")
            return k

        def lin(e):
            return Lin(((pr(k), c) for k, c in e.terms), e.const)

        from .logic.linear import Constraint

        sets = [
            LinearConstraintSet.make([Constraint(c.kind, lin(c.expr), c.mod) for c in d.constraints])
            for d in self.disjuncts
        ]
        defs = [(pr(loc), lin(u), dv) for loc, u, dv in self.local_defs]
        return LinearPredicate(sets, defs)

    def conj(self, other):
        """Conjunction, distributing disjuncts (locals of both sides are kept)."""
        ren = dict()
        defs = list(self.local_defs)
        names = {key_str(loc) for loc, _, _ in defs}
        for loc, u, d in other.local_defs:
            new = loc
            while key_str(new) in names:
                new = Local(new.name + "_")
            ren[loc] = new
            names.add(key_str(new))
            defs.append((new, u, d))
        sets = []
        for a in self.disjuncts:
            for b in other.disjuncts:
                cons = list(a.constraints) + [_rename(c, ren) for c in b.constraints]
                s = LinearConstraintSet.make(cons)
                if not s.is_false:
                    sets.append(s)
        return LinearPredicate(sets, defs)

    # ----------------------------------------------------------- evaluation

    def _compile(self):
        if self._compiled is None:
            cols = sorted(self.symbols()) + [key_str(loc) for loc, _, _ in self.local_defs]
            index = {c: i for i, c in enumerate(cols)}
            rows, consts, kinds, mods, offsets = [], [], [], [], [0]
            for d in self.disjuncts:
                for c in d.constraints:
                    row = [0] * len(cols)
                    for k, v in c.expr.terms:
                        row[index[key_str(k)]] = v
                    rows.append(row)
                    consts.append(c.expr.const)
                    kinds.append(_KIND[c.kind])
                    mods.append(c.mod)
                offsets.append(len(rows))
            coef = np.array(rows, dtype=np.int64).reshape(len(rows), len(cols))
            self._compiled = (
                cols,
                coef,
                np.array(consts, dtype=np.int64),
                np.array(kinds, dtype=np.int64),
                np.array(mods, dtype=np.int64),
                np.array(offsets, dtype=np.int64),
            )
        return self._compiled

    def mask(self, grid, backend=None):
        """Boolean array: which grid rows satisfy the predicate."""
        cols, coef, consts, kinds, mods, offsets = self._compile()
        length = len(next(iter(grid.values()))) if grid else 1
        env = dict(grid)
        for loc, u, d in self.local_defs:
            val = np.full(length, u.const, dtype=np.int64)
            for k, c in u.terms:
                val = val + c * np.asarray(env[key_str(k)], dtype=np.int64)
            env[key_str(loc)] = np.floor_divide(val, d)
        if cols:
            points = np.stack([np.broadcast_to(np.asarray(env[c], dtype=np.int64), (length,)) for c in cols], axis=1)
        else:
            points = np.zeros((length, 0), dtype=np.int64)
        fn = (backend or kernels).dnf_mask
        return fn(points, coef, consts, kinds, mods, offsets)

    def holds(self, assignment):
        """Truth at a single point given as ``{name: int}``."""
        return bool(self.mask({k: np.array([v]) for k, v in assignment.items()})[0])

    def __repr__(self):
        return f"LinearPredicate({len(self.disjuncts)} disjuncts)"


def _rename(c, ren):
    from .logic.linear import Constraint

    if not ren:
        return c
    e = Lin(((ren.get(k, k), v) for k, v in c.expr.terms), c.expr.const)
    return Constraint(c.kind, e, c.mod)


TRUE_PRED = LinearPredicate([LinearConstraintSet(())])
FALSE_PRED = LinearPredicate([])
