"""Replace floor divisions ``u div d`` by fresh witnesses with defining bounds."""
from __future__ import annotations

from ..errors import FragmentViolation, NonConstantDivisor
from ..logic.syntax import (
    Add, And, ArrayRead, Card, FloorDiv, Local, Mul, Num, Sub, conj, le, lt, map_terms, show,
)
from .model import Case, Derived


def derived_constraints(d):
    """``d*t <= u  &  u < d*t + d`` for a witness ``t = u div d``."""
    t = Local(d.name)
    dt = Mul(d.divisor, t)
    return conj(le(dt, d.term), lt(d.term, Add(dt, Num(d.divisor))))


def _contains_div(f):
    found = []

    def fn(t):
        if isinstance(t, FloorDiv):
            found.append(t)
        return t

    map_terms(f, fn)
    return bool(found)


class _Desugarer:
    def __init__(self, existing=()):
        self.table = {}  # (term, divisor) -> Derived
        for d in existing:
            self.table[(d.term, d.divisor)] = d

    def fresh(self, term, divisor):
        if divisor <= 0:
            raise NonConstantDivisor(f"divisor of '{show(FloorDiv(term, divisor))}' must be a positive numeral")
        for t in _subterms(term):
            if isinstance(t, ArrayRead):
                raise FragmentViolation(f"operand of 'div' must not read arrays: {show(term)}")
            if isinstance(t, Card):
                raise FragmentViolation(f"operand of 'div' must not contain cardinalities: {show(term)}")
        key = (term, divisor)
        if key not in self.table:
            self.table[key] = Derived(f"_t{len(self.table)}", term, divisor)
        return self.table[key]

    def rewrite(self, f):
        """Return ``(f', derived used)`` with every division replaced."""
        used = []

        def fn(t):
            if isinstance(t, FloorDiv):
                d = self.fresh(t.term, t.divisor)
                if d not in used:
                    used.append(d)
                return Local(d.name)
            return t

        g = map_terms(f, fn)
        return g, used


def _subterms(t):
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, (Add, Sub)):
            stack.extend((s.left, s.right))
        elif isinstance(s, (Mul, FloorDiv)):
            stack.append(s.term)


def desugar_floor_div(spec):
    """Eliminate ``div`` from every case and from the unsafe formula.

    Each case using a witness gets its defining constraints conjoined; the
    witnesses are listed in ``spec.derived`` (deduplicated by operand and
    divisor).  A division-free spec is returned unchanged.
    """
    parts = [c.body for c in spec.invariant] + [spec.init.body] + [c.body for c in spec.trans] + [spec.unsafe]
    if not any(_contains_div(p) for p in parts):
        return spec
    ds = _Desugarer(spec.derived)

    def case(c):
        body, used = ds.rewrite(c.body)
        if used:
            body = conj(body, *(derived_constraints(d) for d in used))
        return Case(c.var, body, c.keyword, c.index, c.line)

    invariant = tuple(case(c) for c in spec.invariant)
    init = case(spec.init)
    trans = tuple(case(c) for c in spec.trans)
    unsafe, used = ds.rewrite(spec.unsafe)
    if used:
        unsafe = conj(unsafe, *(derived_constraints(d) for d in used))
    derived = tuple(sorted(ds.table.values(), key=lambda d: int(d.name[2:])))
    return spec.with_(invariant=invariant, init=init, trans=trans, unsafe=unsafe, derived=derived)


def definition_atoms(spec):
    """The set of atoms introduced as witness definitions (used to split them off)."""
    out = set()
    for d in spec.derived:
        f = derived_constraints(d)
        out.update(f.args if isinstance(f, And) else (f,))
    return out


__all__ = ["definition_atoms", "derived_constraints", "desugar_floor_div"]
