"""Existential quantifier elimination for linear integer arithmetic with congruences.

The exact route is Cooper's method, preceded by two cheaper exact cases:
unit-coefficient substitution and the Fourier-Motzkin "exact shadow" (every
lower/upper bound pair has a unit coefficient on the eliminated variable).
``fm_real`` is the sound over-approximation used only under a relaxing policy.

A disjunction of constraint sets is a plain list; ``[]`` is false and a list
holding one empty set is true.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from math import gcd

from .logic.linear import (
    CONG, EQ, LE, Constraint, Lin, constraint_sort_key, constraint_to_formula, key_str,
    normalize,
)
from .logic.syntax import conj, disj

log = logging.getLogger(__name__)


def _lcm(a, b):
    return a * b // gcd(a, b)


class LinearConstraintSet:
    """Immutable, normalized conjunction of constraints (or the constant false)."""

    __slots__ = ("constraints", "is_false", "_keys")

    def __init__(self, constraints=(), is_false=False):
        self.constraints = tuple(constraints)
        self.is_false = is_false
        self._keys = None

    @classmethod
    def make(cls, items):
        """Normalize, deduplicate and tighten ``items`` (constraints or booleans)."""
        out = []
        for c in items:
            if not isinstance(c, bool):
                c = normalize(c)
            if c is True:
                continue
            if c is False:
                return FALSE_SET
            out.append(c)
        tightened = _tighten(out)
        if tightened is None:
            return FALSE_SET
        return cls(sorted(tightened, key=constraint_sort_key))

    @property
    def equalities(self):
        return [c for c in self.constraints if c.kind == EQ]

    @property
    def inequalities(self):
        return [c for c in self.constraints if c.kind == LE]

    @property
    def congruences(self):
        return [c for c in self.constraints if c.kind == CONG]

    def keys(self):
        if self._keys is None:
            ks = {}
            for c in self.constraints:
                for k in c.keys():
                    ks[k] = None
            self._keys = sorted(ks, key=key_str)
        return self._keys

    def mentions(self, x):
        return any(c.coeff(x) for c in self.constraints)

    def holds(self, env):
        return not self.is_false and all(c.holds(env) for c in self.constraints)

    def size(self):
        return 1 if self.is_false else max(1, len(self.constraints))

    def to_formula(self):
        if self.is_false:
            return disj()
        return conj(*(constraint_to_formula(c) for c in self.constraints))

    def strings(self):
        return [str(c) for c in self.constraints]

    def __eq__(self, other):
        return (
            isinstance(other, LinearConstraintSet)
            and self.is_false == other.is_false
            and self.constraints == other.constraints
        )

    def __hash__(self):
        return hash((self.constraints, self.is_false))

    def __repr__(self):
        if self.is_false:
            return "LinearConstraintSet(false)"
        return "LinearConstraintSet([" + ", ".join(self.strings()) + "])"


FALSE_SET = LinearConstraintSet((), True)
TRUE_SET = LinearConstraintSet(())


def _tighten(cs):
    """Keep the tightest of parallel inequalities; detect opposite-bound clashes.

    Returns ``None`` when a contradiction is found.
    """
    les = {}
    eqs = {}
    others = []
    for c in cs:
        if c.kind == LE:
            body = c.expr.terms
            if body not in les or les[body].expr.const < c.expr.const:
                les[body] = c
        elif c.kind == EQ:
            body = c.expr.terms
            if body in eqs and eqs[body].expr.const != c.expr.const:
                return None
            eqs[body] = c
        elif c not in others:
            others.append(c)
    extra_eqs = []
    for body, c in list(les.items()):
        if body not in les:
            continue
        negb = tuple((k, -v) for k, v in body)
        if negb in les:
            other = les[negb]
            s = c.expr.const + other.expr.const
            if s > 0:
                return None
            if s == 0:
                del les[body]
                del les[negb]
                extra_eqs.append(normalize(Constraint(EQ, c.expr)))
    for e in extra_eqs:
        if e is False:
            return None
        if e is True:
            continue
        body = e.expr.terms
        if body in eqs and eqs[body].expr.const != e.expr.const:
            return None
        eqs[body] = e
    # inequalities implied or refuted by an equality on the same linear part
    for body, e in eqs.items():
        for sign in (1, -1):
            b = body if sign == 1 else tuple((k, -v) for k, v in body)
            if b in les:
                # sign*(terms) = -sign*e.const, constraint: sign*terms + c <= 0
                val = -e.expr.const * sign + les[b].expr.const
                if val > 0:
                    return None
                del les[b]
    return list(eqs.values()) + list(les.values()) + others


def make_set(items):
    return LinearConstraintSet.make(items)


def _subst_all(constraints, x, value):
    return [c.subst(x, value) for c in constraints]


# ------------------------------------------------------------------ operations


def try_substitution(x, cs):
    """Eliminate ``x`` through an equality with a unit coefficient on it, if any."""
    best = None
    for c in cs.equalities:
        a = c.coeff(x)
        if a in (1, -1):
            if best is None or len(c.expr.terms) < len(best.expr.terms):
                best = c
    if best is None:
        return None
    a = best.coeff(x)
    # a*x + r = 0  ->  x = -r/a = -a*r
    value = best.expr.drop(x).scale(-a)
    rest = [c for c in cs.constraints if c is not best]
    return LinearConstraintSet.make(_subst_all(rest, x, value))


def _eliminate_by_equality(x, cs, eqc):
    a = eqc.coeff(x)
    r = eqc.expr.drop(x)
    m = abs(a)
    sign = 1 if a > 0 else -1
    # a*x = -r, so (m*x) = -sign*r
    ax_value = r.scale(-sign)
    items = [Constraint(CONG, r, m)]
    for c in cs.constraints:
        if c is eqc:
            continue
        b = c.coeff(x)
        if not b:
            items.append(c)
            continue
        e = c.expr.drop(x).scale(m) + ax_value.scale(b)
        items.append(Constraint(c.kind, e, c.mod * m if c.kind == CONG else 0))
    return LinearConstraintSet.make(items)


def cooper(x, cs):
    """Exact elimination of ``exists x`` from ``cs``; returns a disjunction (list)."""
    if cs.is_false:
        return []
    if not cs.mentions(x):
        return [cs]
    eqs = [c for c in cs.equalities if c.coeff(x)]
    if eqs:
        eqc = min(eqs, key=lambda c: (abs(c.coeff(x)), len(c.expr.terms), str(c)))
        if abs(eqc.coeff(x)) == 1:
            res = try_substitution(x, cs)
        else:
            res = _eliminate_by_equality(x, cs, eqc)
        return [] if res.is_false else [res]

    rest = [c for c in cs.constraints if not c.coeff(x)]
    with_x = [c for c in cs.constraints if c.coeff(x)]
    l = 1
    for c in with_x:
        l = _lcm(l, abs(c.coeff(x)))
    unit = []
    for c in with_x:
        b = c.coeff(x)
        k = l // abs(b)
        e = c.expr.scale(k)
        # coefficient of x is now +-l; reinterpret l*x as the new x
        e = e.drop(x) + Lin.of(x, 1 if b > 0 else -1)
        unit.append(Constraint(c.kind, e, c.mod * k if c.kind == CONG else 0))
    if l > 1:
        unit.append(Constraint(CONG, Lin.of(x), l))
    delta = 1
    for c in unit:
        if c.kind == CONG:
            delta = _lcm(delta, c.mod)
    lowers = [c for c in unit if c.kind == LE and c.coeff(x) < 0]
    uppers = [c for c in unit if c.kind == LE and c.coeff(x) > 0]
    congs = [c for c in unit if c.kind == CONG]

    out = []
    seen = set()

    def emit(items):
        s = LinearConstraintSet.make(items)
        if not s.is_false and s not in seen:
            seen.add(s)
            out.append(s)

    if not lowers or not uppers:
        # one side unbounded: only the congruences constrain x
        for j in range(delta):
            emit(rest + _subst_all(congs, x, Lin.constant(j)))
        return out
    use_lower = len(lowers) <= len(uppers)
    bounds = lowers if use_lower else uppers
    for bc in bounds:
        # lower: -x + t <= 0  -> x >= t ; upper: x + t <= 0 -> x <= -t
        t = bc.expr.drop(x)
        point = t if use_lower else t.scale(-1)
        for j in range(delta):
            value = point + (j if use_lower else -j)
            emit(rest + _subst_all(unit, x, value))
    return out


def fm_real(x, cs):
    """Fourier-Motzkin shadow of ``exists x``: implied by the integer projection.

    Congruences on ``x`` are dropped; equalities on ``x`` are split into two
    inequalities.  The result is exact only in the unit-coefficient case.
    """
    if cs.is_false:
        return FALSE_SET
    rest, lowers, uppers = [], [], []
    for c in cs.constraints:
        a = c.coeff(x)
        if not a:
            rest.append(c)
        elif c.kind == CONG:
            continue
        elif c.kind == EQ:
            lowers.append(c.expr if a < 0 else c.expr.scale(-1))
            uppers.append(c.expr if a > 0 else c.expr.scale(-1))
        elif a < 0:
            lowers.append(c.expr)
        else:
            uppers.append(c.expr)
    items = list(rest)
    for lo in lowers:
        a = -lo.coeff(x)
        for up in uppers:
            b = up.coeff(x)
            items.append(Constraint(LE, (lo.scale(b) + up.scale(a)).drop(x)))
    return LinearConstraintSet.make(items)


def exact_shadow_applies(x, cs):
    """True when ``fm_real`` on ``x`` is exact over the integers."""
    lo_unit = up_unit = True
    has_lo = has_up = False
    for c in cs.constraints:
        a = c.coeff(x)
        if not a:
            continue
        if c.kind != LE:
            return False
        if a < 0:
            has_lo = True
            lo_unit = lo_unit and a == -1
        else:
            has_up = True
            up_unit = up_unit and a == 1
    return lo_unit or up_unit or not (has_lo and has_up)


@dataclass
class Policy:
    mode: str = "exact"  # "exact" or "relax"
    size_limit: int = 5000

    @classmethod
    def relax_on_budget(cls, limit):
        return cls("relax", limit)


@dataclass
class QEStats:
    by_kind: Counter = field(default_factory=Counter)
    max_size: int = 0

    def note(self, kind, result):
        self.by_kind[kind] += 1
        size = sum(s.size() for s in result)
        self.max_size = max(self.max_size, size)

    def as_dict(self):
        return {"eliminations": dict(sorted(self.by_kind.items())), "max_intermediate_size": self.max_size}


def eliminate_int_var(x, cs, policy=None, stats=None):
    """Eliminate one variable. Returns ``(disjunction, exact)``.

    Dispatch: substitution, exact shadow, then Cooper; under a relaxing policy
    an over-budget Cooper result is replaced by ``fm_real``.
    """
    policy = policy or Policy()
    if cs.is_false:
        return [], True
    if not cs.mentions(x):
        return [cs], True
    res = try_substitution(x, cs)
    if res is not None:
        out = [] if res.is_false else [res]
        if stats:
            stats.note("substitution", out)
        return out, True
    if exact_shadow_applies(x, cs):
        res = fm_real(x, cs)
        out = [] if res.is_false else [res]
        if stats:
            stats.note("shadow", out)
        return out, True
    out = cooper(x, cs)
    if policy.mode == "relax" and sum(s.size() for s in out) > policy.size_limit:
        res = fm_real(x, cs)
        out = [] if res.is_false else [res]
        log.warning("relaxed elimination of %s to real shadow", key_str(x))
        if stats:
            stats.note("fm_real", out)
        return out, False
    if stats:
        stats.note("cooper", out)
    return out, True


# ------------------------------------------------------------ multi-variable


def _nonneg(cs, v):
    target = Lin.of(v, -1)
    return any(c.kind == LE and c.expr.terms == target.terms and c.expr.const >= 0 for c in cs.constraints)


def _zero_forced(cs, targets):
    """Variables forced to 0 by ``sum(a_i v_i) = 0`` with same-sign ``a_i`` and ``v_i >= 0``."""
    eqs = cs.equalities
    candidates = [c.expr for c in eqs]
    # differences of two equalities expose e.g. "cells outside theta sum to 0"
    for i, a in enumerate(eqs):
        for b in eqs[i + 1:]:
            candidates.append(a.expr - b.expr)
            candidates.append(a.expr + b.expr)
    for e in candidates:
        if e.const != 0 or not e.terms:
            continue
        signs = {v > 0 for _, v in e.terms}
        if len(signs) != 1:
            continue
        ks = [k for k, _ in e.terms]
        if all(k in targets and _nonneg(cs, k) for k in ks):
            return ks
    return None


def _choose(cs, targets):
    present = [k for k in cs.keys() if k in targets]
    if not present:
        return None, None
    occ = Counter()
    for c in cs.constraints:
        for k in c.keys():
            if k in targets:
                occ[k] += 1
    for c in sorted(cs.equalities, key=lambda c: (len(c.expr.terms), str(c))):
        units = [k for k, a in c.expr.terms if k in targets and a in (1, -1)]
        if units:
            return min(units, key=lambda k: (occ[k], key_str(k))), "substitution"
    best, best_cost = None, None
    for k in present:
        if exact_shadow_applies(k, cs):
            lo = sum(1 for c in cs.constraints if c.coeff(k) < 0)
            up = sum(1 for c in cs.constraints if c.coeff(k) > 0)
            cost = (lo * up - lo - up, key_str(k))
            if best_cost is None or cost < best_cost:
                best, best_cost = k, cost
    if best is not None:
        return best, "shadow"
    return min(present, key=lambda k: (occ[k], key_str(k))), "cooper"


def eliminate(targets, disjuncts, policy=None, stats=None):
    """Eliminate every variable in ``targets`` from a disjunction of sets.

    Returns ``(disjunction, exact)`` with the result deduplicated and sorted
    canonically, so the output does not depend on processing order.
    """
    policy = policy or Policy()
    targets = set(targets)
    exact = True
    done = []
    work = [d for d in disjuncts if not d.is_false]
    while work:
        cs = work.pop()
        zero = _zero_forced(cs, targets)
        if zero:
            cs = LinearConstraintSet.make(_subst_many(cs.constraints, zero))
            if stats:
                stats.by_kind["zero"] += len(zero)
            if not cs.is_false:
                work.append(cs)
            continue
        x, kind = _choose(cs, targets)
        if x is None:
            done.append(cs)
            continue
        if kind == "shadow":
            cs = fm_block(cs, targets, stats)
            if not cs.is_false:
                work.append(cs)
            continue
        res, ok = eliminate_int_var(x, cs, policy, stats)
        exact = exact and ok
        work.extend(res)
    uniq = sorted(set(done), key=lambda s: s.strings())
    return uniq, exact


def _subst_many(constraints, keys):
    out = list(constraints)
    for k in keys:
        out = [c if isinstance(c, bool) else c.subst(k, Lin.constant(0)) for c in out]
    return out


def fm_block(cs, targets, stats=None):
    """Run exact-shadow steps for as long as some target admits one.

    Inequalities carry the set of input inequalities they were combined
    from; after ``k`` eliminations any inequality whose history exceeds
    ``k + 1`` is implied by the others (Chernikov's rule) and is dropped.
    Only variables occurring in inequalities alone are eligible.
    """
    others = [c for c in cs.constraints if c.kind != LE]
    blocked = {k for c in others for k in c.keys()}
    rows = {}
    for i, c in enumerate(cs.inequalities):
        rows[c.expr.terms] = (c.expr.const, frozenset((i,)))
    k = 0
    while True:
        cand = None
        for x in sorted({key for terms in rows for key, _ in terms}, key=key_str):
            if x not in targets or x in blocked:
                continue
            lo = [t for t in rows if dict(t).get(x, 0) < 0]
            up = [t for t in rows if dict(t).get(x, 0) > 0]
            if not (all(dict(t)[x] == -1 for t in lo) or all(dict(t)[x] == 1 for t in up)):
                continue
            cost = len(lo) * len(up) - len(lo) - len(up)
            if cand is None or cost < cand[0]:
                cand = (cost, x, lo, up)
        if cand is None:
            break
        _, x, lo, up = cand
        k += 1
        new_rows = {t: v for t, v in rows.items() if not dict(t).get(x, 0)}
        for lt in lo:
            lc, lh = rows[lt]
            a = -dict(lt)[x]
            for ut in up:
                uc, uh = rows[ut]
                hist = lh | uh
                if len(hist) > k + 1:
                    continue
                b = dict(ut)[x]
                e = (Lin(lt, lc).scale(b) + Lin(ut, uc).scale(a)).drop(x)
                c = normalize(Constraint(LE, e))
                if c is True:
                    continue
                if c is False:
                    return FALSE_SET
                old = new_rows.get(c.expr.terms)
                if old is None or old[0] < c.expr.const or (old[0] == c.expr.const and len(old[1]) > len(hist)):
                    new_rows[c.expr.terms] = (c.expr.const, hist)
        rows = new_rows
        if stats:
            stats.by_kind["shadow"] += 1
            stats.max_size = max(stats.max_size, len(rows) + len(others))
    return LinearConstraintSet.make(others + [Constraint(LE, Lin(t, v[0])) for t, v in rows.items()])


def holds_any(disjuncts, env):
    return any(d.holds(env) for d in disjuncts)


def disjunction_formula(disjuncts):
    return disj(*(d.to_formula() for d in disjuncts))
