"""SMT-LIB output: constrained Horn clauses and bounded unrollings.

Identifiers are mangled as ``v_`` + name with every ``_`` doubled, plus
``_p`` for primed copies.  Doubling makes the single-underscore ``_p`` suffix
unambiguous, so the scheme is injective on DSL names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import __version__
from .errors import SymbolClash
from .logic.linear import CONG, EQ, LE, key_str
from .logic.syntax import (
    Add, And, Cmp, Cong, FalseF, FloorDiv, IntVar, Local, Mul, Not, Num, Or, Param, Sub, TrueF, show,
)

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def mangle(name, primed=False, suffix=""):
    out = "v_" + name.replace("_", "__") + ("_p" if primed else "") + suffix
    if not _IDENT.match(out):
        raise SymbolClash(f"cannot mangle {name!r} into an SMT-LIB symbol")
    return out


def _int(v):
    return str(v) if v >= 0 else f"(- {-v})"


def _key_name(k, namer):
    if isinstance(k, (IntVar, Param, Local)):
        return namer(k)
    raise SymbolClash(f"unexpected symbol in a constraint: {key_str(k)}")


def default_namer(k):
    """SMT symbol of a DSL symbol in a single-transition context."""
    return mangle(k.name, getattr(k, "primed", False))


def lin_smt(e, namer=default_namer):
    parts = []
    for k, c in e.terms:
        name = _key_name(k, namer)
        parts.append(name if c == 1 else f"(* {_int(c)} {name})")
    if e.const or not parts:
        parts.append(_int(e.const))
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def constraint_smt(c, namer=default_namer):
    body = lin_smt(c.expr, namer)
    if c.kind == LE:
        return f"(<= {body} 0)"
    if c.kind == EQ:
        return f"(= {body} 0)"
    if c.kind == CONG:
        return f"(= (mod {body} {c.mod}) 0)"
    raise ValueError(c.kind)


def conj_smt(items):
    items = list(items)
    if not items:
        return "true"
    return items[0] if len(items) == 1 else "(and " + " ".join(items) + ")"


def disj_smt(items):
    items = list(items)
    if not items:
        return "false"
    return items[0] if len(items) == 1 else "(or " + " ".join(items) + ")"


def set_smt(s, namer=default_namer):
    if s.is_false:
        return "false"
    return conj_smt(constraint_smt(c, namer) for c in s.constraints)


def dnf_smt(sets, namer=default_namer):
    return disj_smt(set_smt(s, namer) for s in sets)


def term_smt(t, namer=default_namer):
    if isinstance(t, Num):
        return _int(t.value)
    if isinstance(t, (IntVar, Param, Local)):
        return _key_name(t, namer)
    if isinstance(t, Add):
        return f"(+ {term_smt(t.left, namer)} {term_smt(t.right, namer)})"
    if isinstance(t, Sub):
        return f"(- {term_smt(t.left, namer)} {term_smt(t.right, namer)})"
    if isinstance(t, Mul):
        return f"(* {_int(t.coeff)} {term_smt(t.term, namer)})"
    if isinstance(t, FloorDiv):
        # SMT-LIB integer div rounds down for positive divisors
        return f"(div {term_smt(t.term, namer)} {t.divisor})"
    raise SymbolClash(f"term not allowed in an SMT formula: {show(t)}")


def formula_smt(f, namer=default_namer):
    """Quantifier-free arithmetic formula (counters, integer variables, parameters)."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Cmp):
        return f"({f.op} {term_smt(f.left, namer)} {term_smt(f.right, namer)})"
    if isinstance(f, Cong):
        return f"(= (mod (- {term_smt(f.left, namer)} {term_smt(f.right, namer)}) {f.modulus}) 0)"
    if isinstance(f, Not):
        return f"(not {formula_smt(f.arg, namer)})"
    if isinstance(f, And):
        return conj_smt(formula_smt(a, namer) for a in f.args)
    if isinstance(f, Or):
        return disj_smt(formula_smt(a, namer) for a in f.args)
    raise SymbolClash(f"formula not allowed in an SMT query: {show(f)}")


# ------------------------------------------------------------------- horn


@dataclass
class HornProblem:
    predicate: str
    arguments: tuple  # DSL names in argument order
    rules: list = field(default_factory=list)  # (kind, smt text)
    text: str = ""


def _check_injective(names):
    seen = {}
    for n, p in names:
        m = mangle(n, p)
        if m in seen and seen[m] != (n, p):
            raise SymbolClash(f"{n!r} and {seen[m][0]!r} mangle to the same symbol {m}")
        seen[m] = (n, p)


def _header(cs, extra):
    stats = {k: v for k, v in sorted(cs.stats.items()) if not k.endswith("_ms")}
    lines = [
        f"; generated by counterabs {__version__}",
        f"; spec hash: {cs.source_hash or 'n/a'}",
        f"; exact: {'true' if cs.exact else 'false'}",
    ]
    for k, v in stats.items():
        if isinstance(v, dict):
            v = ", ".join(f"{a}={b}" for a, b in sorted(v.items()))
        lines.append(f"; {k}: {v}")
    for k, v in extra:
        lines.append(f"; {k}: {v}")
    return lines


def emit_horn(cs, bad, init=None, predicate="inv", comments=()):
    """Horn clauses whose satisfiability means ``bad`` is unreachable in ``cs``.

    ``bad`` and the optional ``init`` strengthening are formulas over
    parameters, integer variables and counters.
    """
    args = tuple(cs.state_names)
    params = set(cs.params)
    locals_ = [name for name, _, _ in cs.locals]
    _check_injective([(a, False) for a in args] + [(a, True) for a in args if a not in params]
                     + [(n, False) for n in locals_])

    def cur(a):
        return mangle(a)

    def nxt(a):
        return mangle(a) if a in params else mangle(a, True)

    def decl(names):
        return " ".join(f"({n} Int)" for n in names)

    def app(names):
        return f"({predicate} " + " ".join(names) + ")" if names else predicate

    cur_args = [cur(a) for a in args]
    nxt_args = [nxt(a) for a in args]
    local_syms = [mangle(n) for n in locals_]
    local_def = conj_smt(constraint_smt(c) for c in cs.local_constraints())
    phi = dnf_smt(cs.phi0)
    rules = []

    def rule(kind, variables, body, head):
        vs = list(dict.fromkeys(variables))
        text = f"(assert (forall ({decl(vs)})\n  (=> {body}\n      {head})))" if vs else f"(assert (=> {body} {head}))"
        rules.append((kind, text))

    init_extra = formula_smt(init) if init is not None else "true"
    for d in cs.iota0:
        body = conj_smt(x for x in (phi, set_smt(d), init_extra, local_def if locals_ else "") if x and x != "true")
        rule("init", cur_args + local_syms, body, app(cur_args))
    for d in cs.tau0:
        body = conj_smt(x for x in (app(cur_args), phi, set_smt(d), local_def if locals_ else "") if x and x != "true")
        rule("step", cur_args + nxt_args + local_syms, body, app(nxt_args))
    bad_text = formula_smt(bad)
    rule("query", cur_args, conj_smt([app(cur_args), bad_text]) if bad_text != "true" else app(cur_args), "false")

    lines = _header(cs, comments)
    lines.append(f"; argument order: {' '.join(args)}")
    lines.append("(set-logic HORN)")
    lines.append(f"(declare-fun {predicate} (" + " ".join("Int" for _ in args) + ") Bool)")
    for _, text in rules:
        lines.append(text)
    lines.append("(check-sat)")
    text = "\n".join(lines) + "\n"
    return HornProblem(predicate, args, rules, text)


# ---------------------------------------------------------------- bounded


def emit_bounded_smt(cs, bad, depth, init=None, model=False):
    """One satisfiability query: is ``bad`` reachable within ``depth`` steps?

    ``sat`` means an abstract counterexample of length at most ``depth``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    args = tuple(cs.state_names)
    params = set(cs.params)
    locals_ = [name for name, _, _ in cs.locals]

    def at(j):
        def namer(k):
            if isinstance(k, Param) or (isinstance(k, IntVar) and k.name in params):
                return mangle(k.name)
            step = j + 1 if getattr(k, "primed", False) else j
            return mangle(k.name, False, f"_s{step}")

        return namer

    def sym(a, j):
        return mangle(a) if a in params else mangle(a, False, f"_s{j}")

    lines = _header(cs, [("bounded depth", depth)])
    lines.append("(set-logic ALL)")
    for a in args:
        if a in params:
            lines.append(f"(declare-const {mangle(a)} Int)")
    for j in range(depth + 1):
        for a in args:
            if a not in params:
                lines.append(f"(declare-const {sym(a, j)} Int)")
        for n in locals_:
            lines.append(f"(declare-const {mangle(n, False, f'_s{j}')} Int)")

    def step_formula(j):
        # tau0 at step j relates state j (unprimed) to state j + 1 (primed)
        return conj_smt([dnf_smt(cs.phi0, at(j)), dnf_smt(cs.tau0, at(j))])

    def state_formula(f, j):
        return formula_smt(f, at(j))

    for j in range(depth + 1):
        if locals_:
            lines.append(f"(assert {conj_smt(constraint_smt(c, at(j)) for c in cs.local_constraints())})")
    init_parts = [dnf_smt(cs.phi0, at(0)), dnf_smt(cs.iota0, at(0))]
    if init is not None:
        init_parts.append(state_formula(init, 0))
    lines.append(f"(assert {conj_smt(init_parts)})")
    # bad at some depth j, with the first j steps taken
    options = []
    for j in range(depth + 1):
        path = [step_formula(i) for i in range(j)]
        options.append(conj_smt(path + [state_formula(bad, j)]))
    lines.append(f"(assert {disj_smt(options)})")
    lines.append("(check-sat)")
    if model:
        lines.append("(get-model)")
    return "\n".join(lines) + "\n"


__all__ = ["HornProblem", "emit_bounded_smt", "emit_horn", "formula_smt", "mangle"]
