"""Canonical linear forms and normalized linear-integer constraints.

A ``Lin`` is ``sum(c_i * k_i) + const`` where each key ``k_i`` is an opaque
symbol term (``IntVar``, ``Param``, ``Local``, ``ArrayRead`` or ``Card``).
Keys are ordered by their printed form, so two equal forms are equal tuples.

A ``Constraint`` is one of ``e <= 0``, ``e = 0`` or ``e = 0 (mod m)``.
Strict inequalities are folded into ``<=`` because all values are integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd

from .syntax import (
    Add, And, ArrayRead, Card, Cmp, Cong, DataEq, DataEqArr, FalseF, FloorDiv, IntVar, Local,
    Mul, Not, Num, Or, Param, Sub, TrueF, ATOMS, add, show,
)


class NotLinear(ValueError):
    pass


@lru_cache(maxsize=None)
def key_str(k):
    return show(k)


def _sort_key(item):
    return key_str(item[0])


class Lin:
    __slots__ = ("terms", "const", "_hash")

    def __init__(self, terms=(), const=0):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        self.terms = tuple(sorted(((k, c) for k, c in items if c), key=_sort_key))
        self.const = const
        self._hash = None

    @classmethod
    def of(cls, key, coeff=1, const=0):
        return cls(((key, coeff),), const)

    @classmethod
    def constant(cls, c):
        return cls((), c)

    def coeff(self, key):
        for k, c in self.terms:
            if k == key:
                return c
        return 0

    def keys(self):
        return [k for k, _ in self.terms]

    def as_dict(self):
        return dict(self.terms)

    def is_ground(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, int):
            return Lin(self.terms, self.const + other)
        d = dict(self.terms)
        for k, c in other.terms:
            d[k] = d.get(k, 0) + c
        return Lin(d, self.const + other.const)

    def __sub__(self, other):
        if isinstance(other, int):
            return Lin(self.terms, self.const - other)
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, m):
        return Lin(((k, c * m) for k, c in self.terms), self.const * m)

    def drop(self, key):
        return Lin(((k, c) for k, c in self.terms if k != key), self.const)

    def subst(self, key, value):
        """Replace ``key`` by the linear form ``value``."""
        c = self.coeff(key)
        if not c:
            return self
        return self.drop(key) + value.scale(c)

    def evaluate(self, env):
        total = self.const
        for k, c in self.terms:
            total += c * env[k]
        return total

    def __eq__(self, other):
        return isinstance(other, Lin) and self.terms == other.terms and self.const == other.const

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.terms, self.const))
        return self._hash

    def __repr__(self):
        return f"Lin({lin_str(self)})"

    def to_term(self):
        parts = []
        for k, c in self.terms:
            parts.append(k if c == 1 else Mul(c, k))
        if self.const or not parts:
            parts.append(Num(self.const))
        return add(*parts)


def linearize(t):
    """Convert an integer term into a ``Lin``; raises ``NotLinear`` on ``div``."""
    if isinstance(t, Num):
        return Lin.constant(t.value)
    if isinstance(t, (IntVar, Param, Local, ArrayRead, Card)):
        return Lin.of(t)
    if isinstance(t, Add):
        return linearize(t.left) + linearize(t.right)
    if isinstance(t, Sub):
        return linearize(t.left) - linearize(t.right)
    if isinstance(t, Mul):
        return linearize(t.term).scale(t.coeff)
    if isinstance(t, FloorDiv):
        raise NotLinear(f"floor division must be desugared first: {show(t)}")
    raise NotLinear(f"not an integer term: {t!r}")


def lin_str(e):
    parts = []
    for k, c in e.terms:
        s = key_str(k)
        if c == 1:
            parts.append(f"+ {s}")
        elif c == -1:
            parts.append(f"- {s}")
        elif c > 0:
            parts.append(f"+ {c}*{s}")
        else:
            parts.append(f"- {-c}*{s}")
    if e.const or not parts:
        parts.append(f"+ {e.const}" if e.const >= 0 else f"- {-e.const}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ---------------------------------------------------------------- constraints

LE, EQ, CONG = "le", "eq", "cong"


@dataclass(frozen=True)
class Constraint:
    kind: str
    expr: Lin
    mod: int = 0

    def keys(self):
        return self.expr.keys()

    def coeff(self, key):
        return self.expr.coeff(key)

    def holds(self, env):
        v = self.expr.evaluate(env)
        if self.kind == LE:
            return v <= 0
        if self.kind == EQ:
            return v == 0
        return v % self.mod == 0

    def subst(self, key, value):
        return normalize(Constraint(self.kind, self.expr.subst(key, value), self.mod))

    def __str__(self):
        return constraint_str(self)


def _gcd_all(values):
    return reduce(gcd, values, 0)


def _ceil_div(a, b):
    return -((-a) // b)


def normalize(c):
    """Return a canonical ``Constraint`` or the boolean it is equivalent to."""
    e = c.expr
    if c.kind == CONG:
        m = c.mod
        if m < 1:
            raise ValueError("modulus must be positive")
        terms = [(k, v % m) for k, v in e.terms]
        const = e.const % m
        terms = [(k, v) for k, v in terms if v]
        if not terms:
            return const == 0
        g = _gcd_all([v for _, v in terms] + [const, m])
        if g > 1:
            terms = [(k, v // g) for k, v in terms]
            const //= g
            m //= g
        if m == 1:
            return True
        return Constraint(CONG, Lin(terms, const), m)
    if e.is_ground():
        if c.kind == LE:
            return e.const <= 0
        return e.const == 0
    g = _gcd_all(abs(v) for _, v in e.terms)
    if c.kind == LE:
        if g > 1:
            e = Lin(((k, v // g) for k, v in e.terms), _ceil_div(e.const, g))
        return Constraint(LE, e)
    # equality
    if e.const % g:
        return False
    if g > 1:
        e = Lin(((k, v // g) for k, v in e.terms), e.const // g)
    if e.terms[0][1] < 0:
        e = e.scale(-1)
    return Constraint(EQ, e)


def le0(e):
    return normalize(Constraint(LE, e))


def eq0(e):
    return normalize(Constraint(EQ, e))


def cong0(e, m):
    return normalize(Constraint(CONG, e, m))


def negate(c):
    """Negation of a constraint as a list of alternative constraints (a disjunction)."""
    if c.kind == LE:
        return [le0(-c.expr + 1)]
    if c.kind == EQ:
        return [le0(c.expr + 1), le0(-c.expr + 1)]
    return [cong0(c.expr - r, c.mod) for r in range(1, c.mod)]


def atom_alternatives(atom, positive=True):
    """Arithmetic literal -> list of constraints/booleans whose disjunction it means."""
    if isinstance(atom, Cmp):
        e = linearize(atom.left) - linearize(atom.right)
        if atom.op == "<":
            c = le0(e + 1)
        elif atom.op == "<=":
            c = le0(e)
        else:
            c = eq0(e)
    elif isinstance(atom, Cong):
        c = cong0(linearize(atom.left) - linearize(atom.right), atom.modulus)
    else:
        raise TypeError(atom)
    if positive:
        return [c]
    if isinstance(c, bool):
        return [not c]
    return negate(c)


def canonical_literal(atom):
    """Canonical (key, polarity) for an arithmetic atom; used to deduplicate atoms.

    ``x < y`` and ``y <= x`` share a key with opposite polarity.
    """
    [c] = atom_alternatives(atom, True)
    if isinstance(c, bool):
        return c, True
    if c.kind == LE and c.expr.terms[0][1] < 0:
        return le0(-c.expr + 1), False
    return c, True


def constraint_to_formula(c):
    if c is True:
        return TrueF()
    if c is False:
        return FalseF()
    pos = Lin(((k, v) for k, v in c.expr.terms if v > 0))
    negs = Lin(((k, -v) for k, v in c.expr.terms if v < 0))
    const = c.expr.const
    # expr = pos - negs + const
    if const > 0:
        lhs, rhs = pos + const, negs
    else:
        lhs, rhs = pos, negs - const
    lt, rt = lhs.to_term(), rhs.to_term()
    if c.kind == LE:
        return Cmp("<=", lt, rt)
    if c.kind == EQ:
        return Cmp("=", lt, rt)
    return Cong(lt, rt, c.mod)


def constraint_str(c):
    return show(constraint_to_formula(c))


def constraint_sort_key(c):
    return (c.kind, constraint_str(c))


# ----------------------------------------------------------------------- DNF


def nnf(f, positive=True):
    """Negation normal form; negations stay only on atoms."""
    if isinstance(f, TrueF):
        return TrueF() if positive else FalseF()
    if isinstance(f, FalseF):
        return FalseF() if positive else TrueF()
    if isinstance(f, ATOMS):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, And):
        args = tuple(nnf(a, positive) for a in f.args)
        return And(args) if positive else Or(args)
    if isinstance(f, Or):
        args = tuple(nnf(a, positive) for a in f.args)
        return Or(args) if positive else And(args)
    raise TypeError(f"quantifier-free formula expected, got {type(f).__name__}")


def dnf(f):
    """Disjunctive normal form as a list of ``(constraints, data_literals)`` pairs.

    Arithmetic literals become normalized constraints (negated equalities and
    congruences split into disjunctions); data literals are kept as formula
    literals (atoms or negated atoms).  Contradictory conjunctions are dropped.
    """
    g = nnf(f)
    out = []
    seen = set()
    for cs, ds in _dnf(g):
        key = (cs, ds)
        if key in seen:
            continue
        seen.add(key)
        out.append((list(cs), list(ds)))
    return out


def _dnf(g):
    # returns list of (tuple constraints, tuple data literals)
    if isinstance(g, TrueF):
        return [((), ())]
    if isinstance(g, FalseF):
        return []
    if isinstance(g, (DataEq, DataEqArr)) or (isinstance(g, Not) and isinstance(g.arg, (DataEq, DataEqArr))):
        return [((), (g,))]
    if isinstance(g, (Cmp, Cong)) or isinstance(g, Not):
        atom, pos = (g.arg, False) if isinstance(g, Not) else (g, True)
        res = []
        for c in atom_alternatives(atom, pos):
            if c is True:
                res.append(((), ()))
            elif c is not False:
                res.append(((c,), ()))
        return res
    if isinstance(g, Or):
        res = []
        for a in g.args:
            res.extend(_dnf(a))
        return res
    if isinstance(g, And):
        res = [((), ())]
        for a in g.args:
            part = _dnf(a)
            res = [
                (_merge(c1, c2), d1 + tuple(x for x in d2 if x not in d1))
                for c1, d1 in res
                for c2, d2 in part
            ]
            res = [(c, d) for c, d in res if not _data_contradiction(d)]
        return res
    raise TypeError(g)


def _merge(c1, c2):
    out = list(c1)
    for c in c2:
        if c not in out:
            out.append(c)
    return tuple(out)


def _data_contradiction(lits):
    pos = {}
    for l in lits:
        if isinstance(l, DataEq):
            k = (l.array, l.primed, l.var)
            if k in pos and pos[k] != l.value:
                return True
            pos[k] = l.value
    for l in lits:
        if isinstance(l, Not) and l.arg in lits:
            return True
    return False


def conjunction_formula(constraints):
    from .syntax import conj

    return conj(*(constraint_to_formula(c) for c in constraints))
