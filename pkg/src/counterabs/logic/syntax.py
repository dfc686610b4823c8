"""Immutable terms and formulas of the restricted higher-order language.

Atoms are formula nodes themselves; there is no separate wrapper.  ``>`` and
``>=`` never appear in a tree: the smart constructors swap sides so that only
``=``, ``<`` and ``<=`` survive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

from ..errors import SortMismatch

# --------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class IntVar:
    """Integer state variable (including counters) or a bound integer variable."""

    name: str
    primed: bool = False


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Local:
    """Derived local, e.g. a floor-division witness; existentially bound per disjunct."""

    name: str


@dataclass(frozen=True)
class ArrayRead:
    array: str
    var: str
    primed: bool = False


@dataclass(frozen=True)
class Card:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    coeff: int
    term: "Term"


@dataclass(frozen=True)
class FloorDiv:
    term: "Term"
    divisor: int


Term = Union[Num, IntVar, Param, Local, ArrayRead, Card, Add, Sub, Mul, FloorDiv]
SYMBOL_TERMS = (IntVar, Param, Local)

# ------------------------------------------------------------------ formulas


@dataclass(frozen=True)
class Cmp:
    op: str  # one of "=", "<", "<="
    left: Term
    right: Term


@dataclass(frozen=True)
class Cong:
    left: Term
    right: Term
    modulus: int


@dataclass(frozen=True)
class DataEq:
    """``array(var) = value``; ``label`` only drives printing."""

    array: str
    primed: bool
    var: str
    value: int
    label: str = field(default="", compare=False)


@dataclass(frozen=True)
class DataEqArr:
    left: str
    left_primed: bool
    right: str
    right_primed: bool
    var: str


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class ForallProc:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsInt:
    var: str
    body: "Formula"


Formula = Union[Cmp, Cong, DataEq, DataEqArr, TrueF, FalseF, Not, And, Or, ForallProc, ExistsInt]
ATOMS = (Cmp, Cong, DataEq, DataEqArr)
ARITH_ATOMS = (Cmp, Cong)
DATA_ATOMS = (DataEq, DataEqArr)

TRUE = TrueF()
FALSE = FalseF()


class ArraySym(NamedTuple):
    """An array-id occurrence as a free symbol, with its primed flag."""

    name: str
    primed: bool = False


# -------------------------------------------------------------- constructors


def num(v):
    return Num(int(v))


def lt(a, b):
    return Cmp("<", a, b)


def le(a, b):
    return Cmp("<=", a, b)


def gt(a, b):
    return Cmp("<", b, a)


def ge(a, b):
    return Cmp("<=", b, a)


def eq(a, b):
    return Cmp("=", a, b)


def cmp(op, a, b):
    if op in ("=", "<", "<="):
        return Cmp(op, a, b)
    if op == ">":
        return Cmp("<", b, a)
    if op == ">=":
        return Cmp("<=", b, a)
    if op == "!=":
        return Not(Cmp("=", a, b))
    raise ValueError(op)


def conj(*args):
    flat = []
    for a in args:
        if isinstance(a, And):
            flat.extend(a.args)
        elif isinstance(a, TrueF):
            continue
        else:
            flat.append(a)
    if any(isinstance(a, FalseF) for a in flat):
        return FALSE
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args):
    flat = []
    for a in args:
        if isinstance(a, Or):
            flat.extend(a.args)
        elif isinstance(a, FalseF):
            continue
        else:
            flat.append(a)
    if any(isinstance(a, TrueF) for a in flat):
        return TRUE
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(f):
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def add(*terms):
    terms = [t for t in terms if not (isinstance(t, Num) and t.value == 0)]
    if not terms:
        return Num(0)
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


# ------------------------------------------------------------------ printing


def _show_term(t, top=True):
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, IntVar):
        return t.name + ("'" if t.primed else "")
    if isinstance(t, (Param, Local)):
        return t.name
    if isinstance(t, ArrayRead):
        return f"{t.array}{chr(39) if t.primed else ''}({t.var})"
    if isinstance(t, Card):
        return f"#{{{t.var} | {show(t.body)}}}"
    if isinstance(t, Add):
        right = _show_term(t.right, False)
        if isinstance(t.right, (Add, Sub)):
            right = f"({right})"
        s = f"{_show_term(t.left, False)} + {right}"
    elif isinstance(t, Sub):
        right = _show_term(t.right, False)
        if isinstance(t.right, (Add, Sub)):
            right = f"({right})"
        s = f"{_show_term(t.left, False)} - {right}"
    elif isinstance(t, Mul):
        inner = _show_term(t.term, False)
        if isinstance(t.term, (Add, Sub, FloorDiv)):
            inner = f"({inner})"
        return f"{t.coeff}*{inner}"
    elif isinstance(t, FloorDiv):
        inner = _show_term(t.term, False)
        if not isinstance(t.term, (Num, IntVar, Param, Local, ArrayRead, Card)):
            inner = f"({inner})"
        s = f"{inner} div {t.divisor}"
    else:
        raise TypeError(f"not a term: {t!r}")
    return s


def _data_side(array, primed, var):
    return f"{array}{chr(39) if primed else ''}({var})"


def show(x):
    """Render a term or formula in the DSL expression syntax."""
    if not isinstance(x, (TrueF, FalseF, Not, And, Or, ForallProc, ExistsInt, Cmp, Cong, DataEq, DataEqArr)):
        return _show_term(x)
    if isinstance(x, TrueF):
        return "true"
    if isinstance(x, FalseF):
        return "false"
    if isinstance(x, Cmp):
        return f"{_show_term(x.left)} {x.op} {_show_term(x.right)}"
    if isinstance(x, Cong):
        return f"{_show_term(x.left)} = {_show_term(x.right)} (mod {x.modulus})"
    if isinstance(x, DataEq):
        return f"{_data_side(x.array, x.primed, x.var)} = {x.label or x.value}"
    if isinstance(x, DataEqArr):
        return f"{_data_side(x.left, x.left_primed, x.var)} = {_data_side(x.right, x.right_primed, x.var)}"
    if isinstance(x, Not):
        return f"!({show(x.arg)})"
    if isinstance(x, And):
        return " & ".join(_paren(a, (And, Or, ForallProc, ExistsInt)) for a in x.args)
    if isinstance(x, Or):
        return " | ".join(_paren(a, (And, Or, ForallProc, ExistsInt)) for a in x.args)
    if isinstance(x, ForallProc):
        return f"forall {x.var} . {show(x.body)}"
    if isinstance(x, ExistsInt):
        return f"exists {x.var} . {show(x.body)}"
    raise TypeError(x)


def _paren(f, kinds):
    s = show(f)
    return f"({s})" if isinstance(f, kinds) else s


# ------------------------------------------------------------- traversal


def map_terms(f, fn):
    """Rebuild ``f`` applying ``fn`` bottom-up to every term (inside Card bodies too)."""

    def term(t):
        if isinstance(t, Add):
            t = Add(term(t.left), term(t.right))
        elif isinstance(t, Sub):
            t = Sub(term(t.left), term(t.right))
        elif isinstance(t, Mul):
            t = Mul(t.coeff, term(t.term))
        elif isinstance(t, FloorDiv):
            t = FloorDiv(term(t.term), t.divisor)
        elif isinstance(t, Card):
            t = Card(t.var, form(t.body))
        return fn(t)

    def form(g):
        if isinstance(g, Cmp):
            return Cmp(g.op, term(g.left), term(g.right))
        if isinstance(g, Cong):
            return Cong(term(g.left), term(g.right), g.modulus)
        if isinstance(g, Not):
            return Not(form(g.arg))
        if isinstance(g, And):
            return And(tuple(form(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(form(a) for a in g.args))
        if isinstance(g, ForallProc):
            return ForallProc(g.var, form(g.body))
        if isinstance(g, ExistsInt):
            return ExistsInt(g.var, form(g.body))
        return g

    return form(f) if not _is_term(f) else term(f)


def map_atoms(f, fn):
    """Rebuild ``f`` replacing each top-level atom ``a`` by ``fn(a)`` (not inside Card)."""
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, ForallProc):
        return ForallProc(f.var, map_atoms(f.body, fn))
    if isinstance(f, ExistsInt):
        return ExistsInt(f.var, map_atoms(f.body, fn))
    return f


def _is_term(x):
    return isinstance(x, (Num, IntVar, Param, Local, ArrayRead, Card, Add, Sub, Mul, FloorDiv))


def iter_terms(x):
    """Yield every term node of ``x`` (pre-order), descending into Card bodies."""
    stack = [x]
    while stack:
        t = stack.pop()
        if _is_term(t):
            yield t
        if isinstance(t, (Add, Sub)):
            stack.extend((t.right, t.left))
        elif isinstance(t, Mul):
            stack.append(t.term)
        elif isinstance(t, FloorDiv):
            stack.append(t.term)
        elif isinstance(t, Card):
            stack.append(t.body)
        elif isinstance(t, (Cmp, Cong)):
            stack.extend((t.right, t.left))
        elif isinstance(t, Not):
            stack.append(t.arg)
        elif isinstance(t, (And, Or)):
            stack.extend(reversed(t.args))
        elif isinstance(t, (ForallProc, ExistsInt)):
            stack.append(t.body)


def iter_nodes(f):
    """Yield every formula node of ``f`` (pre-order), including Card bodies."""
    for t in _walk(f):
        yield t


def _walk(f):
    yield f
    if isinstance(f, (Cmp, Cong)):
        for t in iter_terms(f):
            if isinstance(t, Card):
                yield from _walk(t.body)
    elif isinstance(f, Not):
        yield from _walk(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _walk(a)
    elif isinstance(f, (ForallProc, ExistsInt)):
        yield from _walk(f.body)


def free_symbols(f):
    """Free integer variables, parameters, derived locals and array-ids of ``f``."""
    out = set()

    def visit(g, bound):
        if isinstance(g, (Cmp, Cong)):
            for t in (g.left, g.right):
                visit_term(t, bound)
        elif isinstance(g, DataEq):
            out.add(ArraySym(g.array, g.primed))
        elif isinstance(g, DataEqArr):
            out.add(ArraySym(g.left, g.left_primed))
            out.add(ArraySym(g.right, g.right_primed))
        elif isinstance(g, Not):
            visit(g.arg, bound)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                visit(a, bound)
        elif isinstance(g, ForallProc):
            visit(g.body, bound)
        elif isinstance(g, ExistsInt):
            visit(g.body, bound | {g.var})

    def visit_term(t, bound):
        for s in iter_terms(t):
            if isinstance(s, IntVar):
                if s.primed or s.name not in bound:
                    out.add(s)
            elif isinstance(s, (Param, Local)):
                out.add(s)
            elif isinstance(s, ArrayRead):
                out.add(ArraySym(s.array, s.primed))
            elif isinstance(s, Card):
                visit(s.body, bound)

    if _is_term(f):
        visit_term(f, frozenset())
    else:
        visit(f, frozenset())
    return out


def substitute(f, mapping):
    """Simultaneous substitution.

    Keys may be ``IntVar``/``Param``/``Local`` (mapped to integer terms),
    ``ArrayRead`` (mapped to an ``IntVar`` only) or ``ArraySym`` (mapped to
    another ``ArraySym``; renames the array everywhere).
    """
    renames = {}
    for k, v in mapping.items():
        if isinstance(k, ArraySym):
            if not isinstance(v, ArraySym):
                raise SortMismatch(f"array {k.name} can only be renamed to an array")
            renames[k] = v
        elif isinstance(k, ArrayRead):
            if not isinstance(v, IntVar):
                raise SortMismatch(f"array read {show(k)} can only be replaced by an integer variable")
        elif isinstance(k, SYMBOL_TERMS):
            if not _is_term(v):
                raise SortMismatch(f"{show(k)} must be replaced by an integer term")
        else:
            raise SortMismatch(f"cannot substitute for {k!r}")

    def rn(name, primed):
        s = renames.get(ArraySym(name, primed))
        return (s.name, s.primed) if s else (name, primed)

    def term(t, bound):
        if isinstance(t, IntVar) and not t.primed and t.name in bound:
            return t
        if t in mapping and not isinstance(t, ArraySym):
            return mapping[t]
        if isinstance(t, ArrayRead):
            a, p = rn(t.array, t.primed)
            return ArrayRead(a, t.var, p)
        if isinstance(t, Add):
            return Add(term(t.left, bound), term(t.right, bound))
        if isinstance(t, Sub):
            return Sub(term(t.left, bound), term(t.right, bound))
        if isinstance(t, Mul):
            return Mul(t.coeff, term(t.term, bound))
        if isinstance(t, FloorDiv):
            return FloorDiv(term(t.term, bound), t.divisor)
        if isinstance(t, Card):
            return Card(t.var, form(t.body, bound))
        return t

    def form(g, bound):
        if isinstance(g, Cmp):
            return Cmp(g.op, term(g.left, bound), term(g.right, bound))
        if isinstance(g, Cong):
            return Cong(term(g.left, bound), term(g.right, bound), g.modulus)
        if isinstance(g, DataEq):
            a, p = rn(g.array, g.primed)
            return DataEq(a, p, g.var, g.value, g.label)
        if isinstance(g, DataEqArr):
            a, p = rn(g.left, g.left_primed)
            b, q = rn(g.right, g.right_primed)
            return DataEqArr(a, p, b, q, g.var)
        if isinstance(g, Not):
            return Not(form(g.arg, bound))
        if isinstance(g, And):
            return And(tuple(form(a, bound) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(form(a, bound) for a in g.args))
        if isinstance(g, ForallProc):
            return ForallProc(g.var, form(g.body, bound))
        if isinstance(g, ExistsInt):
            return ExistsInt(g.var, form(g.body, bound | {g.var}))
        return g

    if _is_term(f):
        return term(f, frozenset())
    return form(f, frozenset())


def prime_state(f, int_vars=None):
    """Prime every array-id and every (state) integer variable occurring in ``f``.

    Parameters and derived locals stay unprimed.  ``int_vars`` restricts which
    integer variables count as state; by default all free unprimed ones do.
    """
    mapping = {}
    for s in free_symbols(f):
        if isinstance(s, ArraySym) and not s.primed:
            mapping[s] = ArraySym(s.name, True)
        elif isinstance(s, IntVar) and not s.primed and (int_vars is None or s.name in int_vars):
            mapping[s] = IntVar(s.name, True)
    return substitute(f, mapping)


def rename_proc_var(f, old, new):
    """Rename the free Proc-variable ``old`` to ``new`` (Card binders untouched)."""
    if old == new:
        return f

    def term(t):
        if isinstance(t, ArrayRead) and t.var == old:
            return ArrayRead(t.array, new, t.primed)
        if isinstance(t, Add):
            return Add(term(t.left), term(t.right))
        if isinstance(t, Sub):
            return Sub(term(t.left), term(t.right))
        if isinstance(t, Mul):
            return Mul(t.coeff, term(t.term))
        if isinstance(t, FloorDiv):
            return FloorDiv(term(t.term), t.divisor)
        return t

    def form(g):
        if isinstance(g, Cmp):
            return Cmp(g.op, term(g.left), term(g.right))
        if isinstance(g, Cong):
            return Cong(term(g.left), term(g.right), g.modulus)
        if isinstance(g, DataEq):
            return DataEq(g.array, g.primed, new if g.var == old else g.var, g.value, g.label)
        if isinstance(g, DataEqArr):
            return DataEqArr(g.left, g.left_primed, g.right, g.right_primed, new if g.var == old else g.var)
        if isinstance(g, Not):
            return Not(form(g.arg))
        if isinstance(g, And):
            return And(tuple(form(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(form(a) for a in g.args))
        if isinstance(g, ForallProc):
            return g if g.var == old else ForallProc(g.var, form(g.body))
        if isinstance(g, ExistsInt):
            return ExistsInt(g.var, form(g.body))
        return g

    return form(f)
