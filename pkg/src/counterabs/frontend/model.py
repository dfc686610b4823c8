"""Resolved, validated specification objects."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from ..logic.syntax import Card, ForallProc, IntVar, conj, disj, prime_state, rename_proc_var, show


@dataclass(frozen=True)
class Sort:
    name: str
    values: tuple

    @property
    def size(self):
        return len(self.values)


@dataclass(frozen=True)
class ArrayId:
    name: str
    sort: str | None  # None for arithmetic arrays

    @property
    def enumerated(self):
        return self.sort is not None


@dataclass(frozen=True)
class CounterDef:
    name: str
    var: str
    body: object  # Data formula over ``var`` and unprimed enumerated arrays
    auto: bool = False

    def card(self, primed=False):
        b = self.body
        if primed:
            b = prime_state(b)
        return Card(self.var, b)


@dataclass(frozen=True)
class Case:
    """A case ``forall var . body``; ``index`` is its position in its section."""

    var: str
    body: object
    keyword: str = "forall"
    index: int = 0
    line: int | None = field(default=None, compare=False)

    def formula(self):
        return ForallProc(self.var, self.body)


@dataclass(frozen=True)
class Derived:
    """Floor-division witness ``name = u div divisor``."""

    name: str
    term: object
    divisor: int


@dataclass(frozen=True)
class SystemSpec:
    params: tuple
    sorts: tuple
    intvars: tuple
    bool_vars: frozenset
    arrays: tuple
    counters: tuple
    invariant: tuple
    init: Case
    trans: tuple
    unsafe: object
    derived: tuple = ()
    source_hash: str = ""

    # -- lookups
    def sort(self, name):
        for s in self.sorts:
            if s.name == name:
                return s
        raise KeyError(name)

    def array(self, name):
        for a in self.arrays:
            if a.name == name:
                return a
        raise KeyError(name)

    def counter(self, name):
        for c in self.counters:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def enumerated(self):
        return tuple(a for a in self.arrays if a.enumerated)

    @property
    def arithmetic(self):
        return tuple(a for a in self.arrays if not a.enumerated)

    def sort_size(self, array):
        return self.sort(self.array(array).sort).size

    @property
    def counter_names(self):
        return tuple(c.name for c in self.counters)

    # -- formulas
    def phi(self):
        if not self.invariant:
            return conj()
        return disj(*(c.formula() for c in self.invariant))

    def iota(self):
        return self.init.formula()

    def tau(self):
        var = self.trans[0].var
        return ForallProc(var, disj(*(rename_proc_var(c.body, c.var, var) for c in self.trans)))

    def counter_definitions(self, primed=False):
        """Mapping counter symbol -> Card term (primed copies use primed arrays)."""
        return {IntVar(c.name, primed): c.card(primed) for c in self.counters}

    def with_(self, **kw):
        return replace(self, **kw)

    def describe(self):
        return {
            "params": list(self.params),
            "intvars": list(self.intvars),
            "arrays": {a.name: a.sort or "int" for a in self.arrays},
            "counters": {c.name: show(c.card()) for c in self.counters},
        }


def spec_hash(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
