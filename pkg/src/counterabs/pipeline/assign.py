"""Step (ii): Boolean assignments over the ground arithmetic atoms."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import AtomBudgetExceeded
from ..logic.linear import LE, constraint_sort_key, le0, negate
from ..logic.syntax import conj, disj, show
from ..presburger import LinearConstraintSet, fm_real

DEFAULT_ATOM_BUDGET = 24


def canonical(c):
    """``(atom, polarity)`` so that an inequality and its negation share the atom."""
    if c.kind == LE and c.expr.terms and c.expr.terms[0][1] < 0:
        return le0(-c.expr + 1), False
    return c, True


def literal_alternatives(atom, polarity):
    """Constraints whose disjunction is the literal."""
    if polarity:
        return [atom]
    return [c for c in negate(atom) if c is not False]


@dataclass(frozen=True)
class Part:
    """One disjunct of a case after step (i): ground literals plus Data literals."""

    literals: tuple  # ((atom, polarity), ...)
    data: tuple
    source: int


@dataclass(frozen=True)
class Assignment:
    literals: tuple  # ((atom, polarity), ...) in alphabet order
    theta: object  # Data formula
    sources: tuple  # indices of the source cases that contributed

    def alpha_strings(self):
        out = []
        for atom, pol in self.literals:
            s = str(atom)
            out.append(s if pol else f"!({s})")
        return out

    def alternatives(self):
        """The assignment as a list of constraint sets (negated equalities split)."""
        sets = [[]]
        for atom, pol in self.literals:
            alts = literal_alternatives(atom, pol)
            sets = [s + [a] for s in sets for a in alts]
        out = []
        for s in sets:
            cs = LinearConstraintSet.make(s)
            if not cs.is_false:
                out.append(cs)
        return out


def make_parts(pairs):
    """``[(LinearConstraintSet, data literals, source)]`` -> ``[Part]``."""
    out = []
    for s, lits, src in pairs:
        out.append(Part(tuple(canonical(c) for c in s.constraints), tuple(lits), src))
    return out


def alphabet(parts):
    seen = {}
    for p in parts:
        for atom, _ in p.literals:
            seen.setdefault(atom, None)
    return sorted(seen, key=constraint_sort_key)


def _feasible(constraints):
    """Cheap refutation by the rational shadow; ``False`` only when truly infeasible."""
    s = LinearConstraintSet.make(constraints)
    while not s.is_false:
        keys = s.keys()
        if not keys:
            return True
        s = fm_real(keys[0], s)
        if len(s.constraints) > 400:
            return True
    return False


def split_assignments(parts, facts=(), budget=DEFAULT_ATOM_BUDGET, prune=True):
    """Enumerate assignments ``alpha`` with their Data formula ``theta_alpha``.

    Assignments are partial: branching stops once every part is decided, so
    an unassigned atom means both values lead to the same ``theta``.  Parts
    whose ground literals are contradicted by ``alpha`` contribute nothing;
    assignments with no contributing part are dropped.  ``facts`` are
    constraints known to hold (used only for pruning).
    """
    atoms = alphabet(parts)
    if len(atoms) > budget:
        raise AtomBudgetExceeded(f"{len(atoms)} ground arithmetic atoms exceed the budget of {budget}")
    order = {a: i for i, a in enumerate(atoms)}
    facts = list(facts)
    out = []

    def visit(assign):
        sat, pending = [], []
        for p in parts:
            status = True
            for atom, pol in p.literals:
                v = assign.get(atom)
                if v is None:
                    status = None
                elif v != pol:
                    status = False
                    break
            if status is False:
                continue
            (sat if status else pending).append(p)
        if not pending:
            if sat:
                lits = tuple(sorted(assign.items(), key=lambda kv: order[kv[0]]))
                theta = disj(*(conj(*p.data) for p in sat))
                out.append(Assignment(lits, theta, tuple(sorted({p.source for p in sat}))))
            return
        nxt = min((a for p in pending for a, _ in p.literals if a not in assign), key=order.get)
        for value in (True, False):
            assign[nxt] = value
            if not prune or _consistent(assign, facts):
                visit(assign)
            del assign[nxt]

    visit({})
    return out


def _consistent(assign, facts):
    cons = list(facts)
    for atom, pol in assign.items():
        alts = literal_alternatives(atom, pol)
        if len(alts) == 1:
            cons.append(alts[0])
    return _feasible(cons)


def describe(assignments):
    return [f"{' & '.join(a.alpha_strings()) or 'true'} => {show(a.theta)}" for a in assignments]
