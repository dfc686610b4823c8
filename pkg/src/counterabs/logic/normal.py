"""Equivalence-preserving simplification and deterministic atom listing."""
from __future__ import annotations

from .linear import NotLinear, canonical_literal
from .syntax import (
    ARITH_ATOMS, ATOMS, And, Card, DataEq, DataEqArr, ExistsInt, FALSE, FalseF,
    ForallProc, Not, Or, TRUE, TrueF,
)


def _arith_truth(atom):
    """Decide an arithmetic atom when it is ground, or by nonnegativity of cardinalities."""
    try:
        key, pos = canonical_literal(atom)
    except NotLinear:
        return None
    if isinstance(key, bool):
        return key == pos
    if key.kind != "le":
        return None
    e = key.expr
    if all(isinstance(k, Card) for k, _ in e.terms):
        # every Card term is >= 0
        if all(c < 0 for _, c in e.terms) and e.const <= 0:
            return pos
        if all(c > 0 for _, c in e.terms) and e.const > 0:
            return not pos
    return None


def simplify(f):
    if isinstance(f, ARITH_ATOMS):
        v = _arith_truth(f)
        if v is None:
            return f
        return TRUE if v else FALSE
    if isinstance(f, (DataEq, DataEqArr)):
        if isinstance(f, DataEqArr) and (f.left, f.left_primed) == (f.right, f.right_primed):
            return TRUE
        return f
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, TrueF):
            return FALSE
        if isinstance(a, FalseF):
            return TRUE
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, And):
        return _junction(f.args, And, TrueF, FalseF)
    if isinstance(f, Or):
        return _junction(f.args, Or, FalseF, TrueF)
    if isinstance(f, ForallProc):
        b = simplify(f.body)
        return TRUE if isinstance(b, TrueF) else ForallProc(f.var, b)
    if isinstance(f, ExistsInt):
        b = simplify(f.body)
        if isinstance(b, (TrueF, FalseF)):
            return b
        return ExistsInt(f.var, b)
    return f


def _junction(args, kind, unit, absorb):
    flat = []
    for a in args:
        a = simplify(a)
        if isinstance(a, kind):
            flat.extend(a.args)
        else:
            flat.append(a)
    out = []
    for a in flat:
        if isinstance(a, unit):
            continue
        if isinstance(a, absorb):
            return absorb()
        if a not in out:
            out.append(a)
    for a in out:
        if isinstance(a, Not) and a.arg in out:
            return absorb()
    if kind is And:
        seen = {}
        for a in out:
            if isinstance(a, DataEq):
                k = (a.array, a.primed, a.var)
                if seen.setdefault(k, a.value) != a.value:
                    return FALSE
        # a positive data literal decides negative literals on the same read
        pos = {(a.array, a.primed, a.var): a.value for a in out if isinstance(a, DataEq)}
        kept = []
        for a in out:
            if isinstance(a, Not) and isinstance(a.arg, DataEq):
                k = (a.arg.array, a.arg.primed, a.arg.var)
                if k in pos and pos[k] != a.arg.value:
                    continue
            kept.append(a)
        out = kept
    if not out:
        return unit()
    if len(out) == 1:
        return out[0]
    return kind(tuple(out))


def atoms_of(f):
    """Atoms of ``f`` in first-occurrence order, without duplicates.

    Arithmetic atoms are deduplicated up to their canonical linear form (so
    ``x < y`` and ``y <= x`` count once); Card bodies are not entered.
    """
    out = []
    seen = set()

    def visit(g):
        if isinstance(g, ATOMS):
            if isinstance(g, ARITH_ATOMS):
                try:
                    key = ("a", canonical_literal(g)[0])
                except NotLinear:
                    key = ("s", g)
            else:
                key = ("d", g)
            if key not in seen:
                seen.add(key)
                out.append(g)
        elif isinstance(g, Not):
            visit(g.arg)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                visit(a)
        elif isinstance(g, (ForallProc, ExistsInt)):
            visit(g.body)

    visit(f)
    return out


def split_atoms(atoms):
    """Partition an atom list into (arithmetic, data) keeping order."""
    arith = [a for a in atoms if isinstance(a, ARITH_ATOMS)]
    data = [a for a in atoms if not isinstance(a, ARITH_ATOMS)]
    return arith, data


def is_ground_arith(atom):
    """True when the arithmetic atom mentions no array read of a free Proc-variable."""
    from .syntax import ArrayRead, iter_terms

    for t in iter_terms(atom):
        if isinstance(t, ArrayRead):
            return False
    return True
