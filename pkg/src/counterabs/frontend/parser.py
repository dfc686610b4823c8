"""Lexer and recursive-descent parser for the sectioned ``.cf`` DSL.

The parser builds formula trees from the logic core but leaves every name
unresolved: identifiers become ``IntVar`` and applications ``ArrayRead``.
``validate`` later decides what each name denotes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import DuplicateDeclaration, FragmentViolation, NonConstantDivisor, SpecSyntaxError
from ..logic.syntax import (
    FALSE, TRUE, Add, And, ArrayRead, Card, Cong, FloorDiv, IntVar, Mul, Not, Num, Or, Sub, cmp,
    show,
)

SECTIONS = ("params", "sorts", "intvars", "arrays", "counters", "invariant", "init", "trans", "unsafe")
KEYWORDS = frozenset(SECTIONS) | {"forall", "case", "div", "mod", "true", "false", "int", "bool"}
RELOPS = ("<=", ">=", "!=", "=", "<", ">")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#(?!\{)[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|\#\{|[;:,={}()|&!'.+\-*<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ------------------------------------------------------------------ parse tree


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class NameDecl:
    name: str
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class SortDecl:
    name: str
    values: tuple
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class IntVarDecl:
    name: str
    type: str  # "int" or "bool"
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class ArrayDecl:
    name: str
    sort: str  # sort name, or "int" for an arithmetic array
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class CounterDecl:
    name: str
    card: Card
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class CaseItem:
    """``forall x . body`` or ``case body``; ``var`` is None for the latter."""

    keyword: str
    var: str | None
    body: object
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class ParsedSpec:
    params: tuple = ()
    sorts: tuple = ()
    intvars: tuple = ()
    arrays: tuple = ()
    counters: tuple = ()
    invariant: tuple = ()
    init: tuple = ()
    trans: tuple = ()
    unsafe: object = None
    unsafe_pos: Pos | None = field(default=None, compare=False)


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.furthest = None

    # -- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts):
        t = self.tok
        return t.kind in ("op", "ident") and t.text in texts

    def error(self, message, expected=(), tok=None):
        t = tok or self.tok
        return SpecSyntaxError(message, t.line, t.col, expected)

    def expect(self, text):
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected '{text}', got '{got}'", (text,))
        self.i += 1
        return self.toks[self.i - 1]

    def ident(self, what="identifier"):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            got = t.text or "end of input"
            raise self.error(f"expected {what}, got '{got}'", (what,))
        self.i += 1
        return t

    def pos(self):
        return Pos(self.tok.line, self.tok.col)

    def at_section(self, name=None):
        t = self.tok
        if t.kind != "ident" or t.text not in SECTIONS or not (self.peek().kind == "op" and self.peek().text == ":"):
            return False
        return name is None or t.text == name

    # -- top level
    def parse(self):
        if not self.at_section("params"):
            raise self.error("expected section 'params'", ("params",))
        out = {}
        seen_names = {}
        order = list(SECTIONS)
        last = -1
        while self.tok.kind != "eof":
            if not self.at_section():
                raise self.error("expected a section header", tuple(s + ":" for s in SECTIONS))
            name = self.tok.text
            idx = order.index(name)
            if idx < last or (idx == last and name != "invariant"):
                raise self.error(f"section '{name}' out of order or repeated")
            last = idx
            self.i += 2
            handler = getattr(self, "_sec_" + name)
            items = handler()
            if name == "unsafe":
                out["unsafe"], out["unsafe_pos"] = items
            else:
                out[name] = out.get(name, ()) + tuple(items)
        for sec in ("init", "trans"):
            if sec not in out:
                raise SpecSyntaxError(f"missing section '{sec}'", expected=(sec,))
        decls = []
        for sec in ("params", "sorts", "intvars", "arrays", "counters"):
            decls.extend(out.get(sec, ()))
        for d in decls:
            if d.name in seen_names:
                raise DuplicateDeclaration(f"{d.pos}: '{d.name}' already declared at {seen_names[d.name]}")
            seen_names[d.name] = d.pos
        return ParsedSpec(**out)

    def _items(self, one):
        items = []
        while not self.at_section() and self.tok.kind != "eof":
            items.extend(one())
            self.expect(";")
        return items

    def _name_list(self):
        names = [self.ident("name")]
        while self.at(","):
            self.i += 1
            names.append(self.ident("name"))
        return names

    def _sec_params(self):
        return self._items(lambda: [NameDecl(t.text, Pos(t.line, t.col)) for t in self._name_list()])

    def _sec_sorts(self):
        def one():
            t = self.ident("sort name")
            self.expect("=")
            self.expect("{")
            values = [self._value_name()]
            while self.at(","):
                self.i += 1
                values.append(self._value_name())
            self.expect("}")
            if len(set(values)) != len(values):
                raise DuplicateDeclaration(f"{t.line}:{t.col}: repeated value in sort '{t.text}'")
            return [SortDecl(t.text, tuple(values), Pos(t.line, t.col))]

        return self._items(one)

    def _value_name(self):
        t = self.tok
        if t.kind == "num" or (t.kind == "ident" and t.text not in KEYWORDS):
            self.i += 1
            return t.text
        raise self.error("expected a value name", ("value name",))

    def _sec_intvars(self):
        def one():
            names = self._name_list()
            typ = "int"
            if self.at(":"):
                self.i += 1
                if not self.at("int", "bool"):
                    raise self.error("expected 'int' or 'bool'", ("int", "bool"))
                typ = self.tok.text
                self.i += 1
            return [IntVarDecl(t.text, typ, Pos(t.line, t.col)) for t in names]

        return self._items(one)

    def _sec_arrays(self):
        def one():
            names = self._name_list()
            self.expect(":")
            if self.at("int"):
                self.i += 1
                sort = "int"
            else:
                sort = self.ident("sort name or 'int'").text
            return [ArrayDecl(t.text, sort, Pos(t.line, t.col)) for t in names]

        return self._items(one)

    def _sec_counters(self):
        def one():
            t = self.ident("counter name")
            self.expect("=")
            if not self.at("#{"):
                raise self.error("expected a cardinality term '#{k | ...}'", ("#{",))
            card = self.card()
            return [CounterDecl(t.text, card, Pos(t.line, t.col))]

        return self._items(one)

    def _case(self):
        p = self.pos()
        if self.at("forall"):
            self.i += 1
            var = self.ident("process variable").text
            self.expect(".")
            return [CaseItem("forall", var, self.formula(), p)]
        if self.at("case"):
            self.i += 1
            return [CaseItem("case", None, self.formula(), p)]
        raise self.error("expected 'forall' or 'case'", ("forall", "case"))

    def _sec_invariant(self):
        return self._items(self._case)

    def _sec_init(self):
        return self._items(self._case)

    def _sec_trans(self):
        items = self._items(self._case)
        if not items:
            raise self.error("section 'trans' needs at least one case", ("forall", "case"))
        return items

    def _sec_unsafe(self):
        p = self.pos()
        f = self.formula()
        self.expect(";")
        if not self.at_section() and self.tok.kind != "eof":
            raise self.error("section 'unsafe' holds a single formula")
        return f, p

    # -- formulas
    def formula(self):
        args = [self.conjunction()]
        while self.at("|"):
            self.i += 1
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self):
        args = [self.unary()]
        while self.at("&"):
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("true"):
            self.i += 1
            return TRUE
        if self.at("false"):
            self.i += 1
            return FALSE
        if self.at("("):
            save = self.i
            try:
                return self.atom()
            except SpecSyntaxError as e1:
                err_atom = e1
                furthest = self.i
                self.i = save
            try:
                self.expect("(")
                f = self.formula()
                self.expect(")")
                return f
            except SpecSyntaxError as e2:
                if self.i >= furthest:
                    raise e2
                raise err_atom
        return self.atom()

    def atom(self):
        left = self.term()
        t = self.tok
        if not (t.kind == "op" and t.text in RELOPS):
            raise self.error(f"expected a comparison, got '{t.text or 'end of input'}'", RELOPS)
        self.i += 1
        right = self.term()
        if self.at("(") and self.peek().text == "mod":
            if t.text != "=":
                raise self.error("congruence needs '='", ("=",), tok=t)
            self.i += 2
            m = self.tok
            if m.kind != "num":
                raise self.error("expected a numeral modulus", ("numeral",))
            self.i += 1
            self.expect(")")
            if int(m.text) < 2:
                raise SpecSyntaxError("modulus must be at least 2", m.line, m.col)
            return Cong(left, right, int(m.text))
        return cmp(t.text, left, right)

    def term(self):
        out = self.product()
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            rhs = self.product()
            out = Add(out, rhs) if op == "+" else Sub(out, rhs)
        return out

    def product(self):
        out = self.factor()
        while self.at("*", "div"):
            op = self.tok
            self.i += 1
            rhs = self.factor()
            if op.text == "div":
                if not isinstance(rhs, Num):
                    raise NonConstantDivisor(f"{op.line}:{op.col}: divisor of 'div' must be a numeral, got {show(rhs)}")
                out = FloorDiv(out, rhs.value)
            elif isinstance(out, Num):
                out = Mul(out.value, rhs)
            elif isinstance(rhs, Num):
                out = Mul(rhs.value, out)
            else:
                raise FragmentViolation(f"{op.line}:{op.col}: nonlinear product {show(out)} * {show(rhs)}")
        return out

    def factor(self):
        t = self.tok
        if t.kind == "op" and t.text == "-":
            self.i += 1
            inner = self.factor()
            if isinstance(inner, Num):
                return Num(-inner.value)
            return Mul(-1, inner)
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "op" and t.text == "#{":
            return self.card()
        if t.kind == "op" and t.text == "(":
            self.i += 1
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            primed = False
            if self.at("'"):
                self.i += 1
                primed = True
            if self.at("(") and self.peek().kind == "ident" and self.peek(2).text == ")" and self.peek().text not in KEYWORDS:
                var = self.peek().text
                self.i += 3
                return ArrayRead(t.text, var, primed)
            return IntVar(t.text, primed)
        raise self.error(f"expected a term, got '{t.text or 'end of input'}'", ("numeral", "identifier", "#{", "("))

    def card(self):
        self.expect("#{")
        var = self.ident("bound variable").text
        self.expect("|")
        body = self.formula()
        self.expect("}")
        return Card(var, body)


def parse_spec(text):
    """Parse DSL source into a ``ParsedSpec`` (names unresolved)."""
    return Parser(text).parse()


def parse_formula(text):
    """Parse a standalone formula in the DSL expression syntax."""
    p = Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected '{p.tok.text}' after formula")
    return f


# --------------------------------------------------------------------- printer


def print_spec(ps):
    """Render a ``ParsedSpec`` back to DSL text; reparsing yields an equal tree."""
    lines = ["params: " + ", ".join(d.name for d in ps.params) + ";"]
    if ps.sorts:
        lines.append("sorts:")
        lines.extend(f"  {s.name} = {{{', '.join(s.values)}}};" for s in ps.sorts)
    if ps.intvars:
        lines.append("intvars:")
        lines.extend(f"  {v.name} : {v.type};" for v in ps.intvars)
    if ps.arrays:
        lines.append("arrays:")
        lines.extend(f"  {a.name} : {a.sort};" for a in ps.arrays)
    if ps.counters:
        lines.append("counters:")
        lines.extend(f"  {c.name} = {show(c.card)};" for c in ps.counters)
    for sec in ("invariant", "init", "trans"):
        cases = getattr(ps, sec)
        if not cases and sec == "invariant":
            continue
        lines.append(f"{sec}:")
        for c in cases:
            head = f"forall {c.var} ." if c.keyword == "forall" else "case"
            lines.append(f"  {head} {show(c.body)};")
    if ps.unsafe is not None:
        lines.append(f"unsafe: {show(ps.unsafe)};")
    return "\n".join(lines) + "\n"


__all__ = [
    "ArrayDecl", "CaseItem", "CounterDecl", "IntVarDecl", "NameDecl", "ParsedSpec", "Pos", "SortDecl",
    "Token", "parse_formula", "parse_spec", "print_spec", "tokenize",
]
