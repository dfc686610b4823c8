"""Step (i): remove arithmetic arrays by reverse skolemization, then map cardinalities to counters."""
from __future__ import annotations

import logging

from ..errors import FragmentViolation
from ..logic.linear import Constraint, Lin, dnf
from ..logic.syntax import (
    And, ArrayRead, Card, ForallProc, IntVar, conj, disj, iter_terms, map_terms, rename_proc_var,
    show,
)
from ..presburger import LinearConstraintSet, Policy, eliminate
from .cells import data_arrays, truth_table

log = logging.getLogger(__name__)


def strip_definitions(body, def_atoms):
    """Split top-level witness definitions off a case body: ``(rest, definitions)``."""
    if not def_atoms:
        return body, []
    args = body.args if isinstance(body, And) else (body,)
    keep = [a for a in args if a not in def_atoms]
    defs = [a for a in args if a in def_atoms]
    return conj(*keep), defs


def skolem_disjuncts(body, var, policy=None, stats=None):
    """DNF of ``body`` with the arithmetic reads at ``var`` projected away.

    Every read ``a(var)`` / ``a'(var)`` becomes a fresh integer ``_r<j>``;
    each DNF conjunct is then closed under exact elimination of those
    integers.  Returns ``([(LinearConstraintSet, data literals)], exact)``.
    """
    reads = {}

    def fn(t):
        if isinstance(t, ArrayRead):
            if t.var != var:
                raise FragmentViolation(f"arithmetic read '{show(t)}' is not indexed by the case variable '{var}'")
            if t not in reads:
                reads[t] = IntVar(f"_r{len(reads)}")
            return reads[t]
        return t

    g = map_terms(body, fn)
    fresh = set(reads.values())
    out = []
    exact = True
    for cs, lits in dnf(g):
        local = [c for c in cs if any(k in fresh for k in c.keys())]
        ground = [c for c in cs if not any(k in fresh for k in c.keys())]
        base = LinearConstraintSet.make(local)
        if base.is_false:
            continue
        res, ok = eliminate(fresh, [base], policy or Policy(), stats)
        exact = exact and ok
        for r in res:
            s = LinearConstraintSet.make(list(r.constraints) + ground)
            if not s.is_false:
                out.append((s, tuple(lits)))
    return out, exact


def reverse_skolemize_case(case_formula, policy=None):
    """``forall x . phi`` -> equivalent ``forall x . phi'`` without arithmetic arrays."""
    var, body = case_formula.var, case_formula.body
    parts, _ = skolem_disjuncts(body, var, policy)
    return ForallProc(var, disj(*(conj(s.to_formula(), *lits) for s, lits in parts)))


class CounterMatcher:
    """Maps cardinality terms to declared counters, auto-declaring the rest.

    Two terms match when their bodies have the same truth table over the
    union of the arrays they read (so bound-variable names and Boolean
    shape do not matter).
    """

    def __init__(self, spec):
        self.spec = spec
        self.sizes = {}
        for a in spec.enumerated:
            self.sizes[(a.name, False)] = self.sizes[(a.name, True)] = spec.sort_size(a.name)
        self.declared = []
        for c in spec.counters:
            for primed in (False, True):
                body = c.card(primed).body
                self.declared.append((IntVar(c.name, primed), body))
        self.auto = []  # (IntVar, Card)
        self._cache = {}

    def _canon(self, card):
        return rename_proc_var(card.body, card.var, "k")

    def symbol_for(self, card):
        body = self._canon(card)
        if body in self._cache:
            return self._cache[body]
        arrs = data_arrays(body)
        found = None
        for sym, dbody in self.declared:
            darrs = data_arrays(dbody)
            union = sorted(set(arrs) | set(darrs))
            if truth_table(body, union, self.sizes) == truth_table(dbody, union, self.sizes):
                found = sym
                break
        if found is None:
            for sym, abody in self.auto:
                union = sorted(set(arrs) | set(data_arrays(abody)))
                if truth_table(body, union, self.sizes) == truth_table(abody, union, self.sizes):
                    found = sym
                    break
        if found is None:
            found = IntVar(f"_zaux{len(self.auto)}")
            self.auto.append((found, body))
            log.info("auto-declared counter %s = #{k | %s}", found.name, show(body))
        self._cache[body] = found
        return found

    def definitions(self):
        """All ``(symbol, body)`` pairs: declared (both primings) then auto counters."""
        return list(self.declared) + list(self.auto)

    def replace_lin(self, e):
        d = {}
        for k, c in e.terms:
            if isinstance(k, Card):
                k = self.symbol_for(k)
            d[k] = d.get(k, 0) + c
        return Lin(d, e.const)

    def replace_set(self, s):
        return LinearConstraintSet.make(
            [Constraint(c.kind, self.replace_lin(c.expr), c.mod) for c in s.constraints]
        )


def replace_counters(f, matcher):
    """Formula-level replacement of cardinality terms by counter symbols."""

    def fn(t):
        if isinstance(t, Card):
            return matcher.symbol_for(t)
        return t

    return map_terms(f, fn)


def nonneg_trivial(s, nonneg):
    """Drop constraints decided by nonnegativity of the symbols accepted by ``nonneg``."""
    if s.is_false:
        return s
    keep = []
    for c in s.constraints:
        if c.kind == "le" and all(nonneg(k) for k in c.keys()):
            coeffs = [v for _, v in c.expr.terms]
            if all(v < 0 for v in coeffs) and c.expr.const <= 0:
                continue
            if all(v > 0 for v in coeffs) and c.expr.const > 0:
                return LinearConstraintSet((), True)
        keep.append(c)
    return LinearConstraintSet.make(keep)


def cards_in(f):
    return [t for t in iter_terms(f) if isinstance(t, Card)]


__all__ = [
    "CounterMatcher", "cards_in", "nonneg_trivial", "replace_counters",
    "reverse_skolemize_case", "skolem_disjuncts", "strip_definitions",
]
