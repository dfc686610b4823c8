"""Name resolution and fragment checks: ``ParsedSpec`` -> ``SystemSpec``."""
from __future__ import annotations

from ..errors import FragmentViolation, MultipleInitCases, SortMismatch, UnknownSymbol
from ..logic.syntax import (
    Add, And, ArrayRead, ArraySym, Card, Cmp, Cong, DataEq, DataEqArr, FalseF, FloorDiv, IntVar,
    Mul, Not, Num, Or, Param, Sub, TrueF, conj, free_symbols, le, num, show,
)
from .model import ArrayId, Case, CounterDef, Sort, SystemSpec

PROC_DEFAULT = "x"


class _Ctx:
    def __init__(self, ps):
        self.params = [d.name for d in ps.params]
        self.sorts = {s.name: s.values for s in ps.sorts}
        self.intvars = [d.name for d in ps.intvars]
        self.bools = {d.name for d in ps.intvars if d.type == "bool"}
        self.arrays = {}
        for a in ps.arrays:
            if a.sort != "int" and a.sort not in self.sorts:
                raise UnknownSymbol(f"{a.pos}: array '{a.name}' has undeclared sort '{a.sort}'")
            self.arrays[a.name] = None if a.sort == "int" else a.sort
        self.counters = {}

    def where(self, pos):
        return f"{pos}: " if pos is not None else ""


class _Resolver:
    """Resolves one formula under fixed permissions.

    ``proc`` is the Proc-variable of the enclosing case (None: no arrays
    allowed); ``primes`` allows primed state symbols; ``expand_counters``
    replaces counter names by their cardinality terms.
    """

    def __init__(self, ctx, proc, primes, expand_counters, where, what):
        self.ctx = ctx
        self.proc = proc
        self.primes = primes
        self.expand = expand_counters
        self.where = where
        self.what = what

    def fail(self, cls, msg):
        return cls(f"{self.where}{msg} (in {self.what})")

    # -- formulas
    def form(self, f, card_var=None):
        if isinstance(f, (TrueF, FalseF)):
            return f
        if isinstance(f, Not):
            return Not(self.form(f.arg, card_var))
        if isinstance(f, And):
            return And(tuple(self.form(a, card_var) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(self.form(a, card_var) for a in f.args))
        if isinstance(f, Cmp):
            data = self._data_atom(f, card_var)
            if data is not None:
                return data
            if card_var is not None:
                raise self.fail(FragmentViolation, f"arithmetic atom '{show(f)}' inside a cardinality body")
            return Cmp(f.op, self.term(f.left), self.term(f.right))
        if isinstance(f, Cong):
            if card_var is not None:
                raise self.fail(FragmentViolation, f"arithmetic atom '{show(f)}' inside a cardinality body")
            return Cong(self.term(f.left), self.term(f.right), f.modulus)
        raise self.fail(FragmentViolation, f"unexpected construct '{show(f)}'")

    def _enum_read(self, t):
        return isinstance(t, ArrayRead) and self.ctx.arrays.get(t.array) is not None

    def _check_read(self, t, card_var):
        if t.array not in self.ctx.arrays:
            raise self.fail(UnknownSymbol, f"unknown array '{t.array}'")
        if t.primed and not self.primes:
            raise self.fail(FragmentViolation, f"primed array '{show(t)}' not allowed here")
        expected = card_var if card_var is not None else self.proc
        if expected is None:
            raise self.fail(FragmentViolation, f"array read '{show(t)}' not allowed here")
        if t.var != expected:
            raise self.fail(
                FragmentViolation,
                f"array read '{show(t)}' uses Proc-variable '{t.var}' but only '{expected}' is in scope",
            )

    def _data_atom(self, f, card_var):
        l_enum, r_enum = self._enum_read(f.left), self._enum_read(f.right)
        if not (l_enum or r_enum):
            return None
        if f.op != "=":
            raise self.fail(SortMismatch, f"enumerated arrays only support equality: '{show(f)}'")
        if l_enum and r_enum:
            a, b = f.left, f.right
            if a.var != b.var:
                raise self.fail(
                    FragmentViolation, f"Data-atom '{show(f)}' relates two distinct Proc-variables"
                )
            self._check_read(a, card_var)
            self._check_read(b, card_var)
            if self.ctx.arrays[a.array] != self.ctx.arrays[b.array]:
                raise self.fail(SortMismatch, f"'{show(f)}' compares arrays of different sorts")
            return DataEqArr(a.array, a.primed, b.array, b.primed, a.var)
        read, other = (f.left, f.right) if l_enum else (f.right, f.left)
        self._check_read(read, card_var)
        sort = self.ctx.arrays[read.array]
        values = self.ctx.sorts[sort]
        if isinstance(other, IntVar) and not other.primed:
            label = other.name
        elif isinstance(other, Num):
            label = str(other.value)
        else:
            raise self.fail(SortMismatch, f"'{show(other)}' is not a value of sort {sort}")
        if label not in values:
            raise self.fail(SortMismatch, f"'{label}' is not a value of sort {sort}")
        return DataEq(read.array, read.primed, read.var, values.index(label), label)

    # -- terms
    def term(self, t):
        ctx = self.ctx
        if isinstance(t, Num):
            return t
        if isinstance(t, IntVar):
            name = t.name
            if name in ctx.params:
                if t.primed:
                    raise self.fail(FragmentViolation, f"parameter '{name}' cannot be primed")
                return Param(name)
            if t.primed and not self.primes:
                raise self.fail(FragmentViolation, f"primed symbol '{show(t)}' not allowed here")
            if name in ctx.intvars:
                return IntVar(name, t.primed)
            if name in ctx.counters:
                if not self.expand:
                    return IntVar(name, t.primed)
                return ctx.counters[name].card(t.primed)
            if name in ctx.arrays:
                raise self.fail(SortMismatch, f"array '{name}' used without an index")
            if any(name in vs for vs in ctx.sorts.values()):
                raise self.fail(SortMismatch, f"value '{name}' used as an integer")
            raise self.fail(UnknownSymbol, f"unknown symbol '{show(t)}'")
        if isinstance(t, ArrayRead):
            if t.array in ctx.arrays and ctx.arrays[t.array] is not None:
                raise self.fail(SortMismatch, f"enumerated read '{show(t)}' used as an integer")
            self._check_read(t, None)
            return t
        if isinstance(t, Card):
            if self.proc is None and not self.expand:
                raise self.fail(FragmentViolation, f"cardinality term '{show(t)}' not allowed here")
            body = self.form(t.body, card_var=t.var)
            return Card(t.var, body)
        if isinstance(t, Add):
            return Add(self.term(t.left), self.term(t.right))
        if isinstance(t, Sub):
            return Sub(self.term(t.left), self.term(t.right))
        if isinstance(t, Mul):
            return Mul(t.coeff, self.term(t.term))
        if isinstance(t, FloorDiv):
            return FloorDiv(self.term(t.term), t.divisor)
        raise self.fail(FragmentViolation, f"unexpected term {t!r}")


def _free_proc_vars(f, bound=frozenset()):
    """Proc-variables read outside cardinality binders, in first-occurrence order."""
    out = []

    def term(t):
        if isinstance(t, ArrayRead):
            if t.var not in out:
                out.append(t.var)
        elif isinstance(t, (Add, Sub)):
            term(t.left)
            term(t.right)
        elif isinstance(t, (Mul, FloorDiv)):
            term(t.term)

    def form(g):
        if isinstance(g, (Cmp, Cong)):
            term(g.left)
            term(g.right)
        elif isinstance(g, Not):
            form(g.arg)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                form(a)

    form(f)
    return out


def _resolve_case(ctx, item, index, primes, what):
    where = ctx.where(item.pos)
    if item.keyword == "forall":
        var = item.var
        others = [v for v in _free_proc_vars(item.body) if v != var]
        if others:
            raise FragmentViolation(
                f"{where}Proc-variable '{others[0]}' is not bound by 'forall {var}' (in {what})"
            )
    else:
        found = _free_proc_vars(item.body)
        if len(found) > 1:
            raise FragmentViolation(f"{where}case mentions Proc-variables {found}; only one is allowed (in {what})")
        var = found[0] if found else PROC_DEFAULT
    if var in ctx.params or var in ctx.intvars or var in ctx.arrays or var in ctx.counters:
        raise FragmentViolation(f"{where}Proc-variable '{var}' clashes with a declared name (in {what})")
    r = _Resolver(ctx, var, primes, True, where, what)
    body = r.form(item.body)
    return Case(var, body, item.keyword, index, item.pos.line if item.pos else None)


def validate(ps):
    """Resolve names and enforce the syntactic fragment; returns a ``SystemSpec``."""
    names = [d.name for d in ps.params]
    if names.count("N") != 1:
        raise FragmentViolation("the parameters must include the process count 'N' exactly once")
    for d in list(ps.params) + list(ps.sorts) + list(ps.intvars) + list(ps.arrays) + list(ps.counters):
        if d.name.startswith("_"):
            raise FragmentViolation(f"{d.pos}: names starting with '_' are reserved ('{d.name}')")
    ctx = _Ctx(ps)
    value_names = {v for vs in ctx.sorts.values() for v in vs}
    for d in list(ps.params) + list(ps.intvars) + list(ps.arrays) + list(ps.counters):
        if d.name in value_names:
            raise FragmentViolation(f"{d.pos}: '{d.name}' is both a declared symbol and a sort value")

    counters = []
    for c in ps.counters:
        r = _Resolver(ctx, None, False, False, ctx.where(c.pos), f"counter {c.name}")
        body = r.form(c.card.body, card_var=c.card.var)
        for sub in _reads(body):
            if ctx.arrays.get(sub) is None:
                raise FragmentViolation(f"{c.pos}: counter '{c.name}' reads arithmetic array '{sub}'")
        cd = CounterDef(c.name, c.card.var, body)
        counters.append(cd)
        ctx.counters[c.name] = cd

    invariant = [_resolve_case(ctx, it, i, False, "invariant") for i, it in enumerate(ps.invariant)]
    if len(ps.init) != 1:
        raise MultipleInitCases(f"exactly one init case is allowed, found {len(ps.init)}")
    init = _resolve_case(ctx, ps.init[0], 0, False, "init")
    trans = [_resolve_case(ctx, it, i, True, "trans") for i, it in enumerate(ps.trans)]

    if ps.unsafe is None:
        unsafe = FalseF()
    else:
        r = _Resolver(ctx, None, False, False, ctx.where(ps.unsafe_pos), "unsafe")
        unsafe = r.form(ps.unsafe)

    bools = sorted(ctx.bools, key=ctx.intvars.index)
    if bools:
        box = conj(*(conj(le(num(0), IntVar(b)), le(IntVar(b), num(1))) for b in bools))
        if invariant:
            invariant = [Case(c.var, conj(c.body, box), c.keyword, c.index, c.line) for c in invariant]
        else:
            invariant = [Case(PROC_DEFAULT, box, "case", 0, None)]

    return SystemSpec(
        params=tuple(names),
        sorts=tuple(Sort(s.name, s.values) for s in ps.sorts),
        intvars=tuple(ctx.intvars),
        bool_vars=frozenset(bools),
        arrays=tuple(ArrayId(a.name, None if a.sort == "int" else a.sort) for a in ps.arrays),
        counters=tuple(counters),
        invariant=tuple(invariant),
        init=init,
        trans=tuple(trans),
        unsafe=unsafe,
    )


def _reads(f):
    return sorted({s.name for s in free_symbols(f) if isinstance(s, ArraySym)})


def resolve_formula(spec, text_or_tree, allow_primed=False):
    """Resolve a standalone arithmetic formula (e.g. a property) against ``spec``."""
    from .parser import ParsedSpec, parse_formula

    tree = parse_formula(text_or_tree) if isinstance(text_or_tree, str) else text_or_tree
    ctx = _Ctx(ParsedSpec())
    ctx.params = list(spec.params)
    ctx.intvars = list(spec.intvars)
    ctx.sorts = {s.name: s.values for s in spec.sorts}
    ctx.arrays = {a.name: a.sort for a in spec.arrays}
    ctx.counters = {c.name: c for c in spec.counters}
    r = _Resolver(ctx, None, allow_primed, False, "", "formula")
    return r.form(tree)
