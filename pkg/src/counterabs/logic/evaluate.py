"""Finite-model evaluation of terms and formulas at a fixed process count."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnboundSymbol, UnboundedExistential
from .syntax import (
    Add, And, ArrayRead, Card, Cmp, Cong, DataEq, DataEqArr, ExistsInt, FalseF, FloorDiv,
    ForallProc, IntVar, Local, Mul, Not, Num, Or, Param, Sub, TrueF, show,
)


@dataclass(frozen=True)
class ConcreteState:
    """Explicit configuration: ``arrays`` maps an array-id to a tuple of length ``n``.

    Enumerated arrays store value indices, arithmetic arrays store integers.
    """

    n: int
    params: dict = field(default_factory=dict)
    ints: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)

    def key(self):
        return (
            self.n,
            tuple(sorted(self.params.items())),
            tuple(sorted(self.ints.items())),
            tuple(sorted(self.arrays.items())),
        )


def eval_term(t, state, env=None, nxt=None, bound=None):
    return _Evaluator(state, env or {}, nxt, bound).term(t)


def evaluate(f, state, env=None, nxt=None, bound=None):
    """Truth value of ``f``.

    ``env`` maps symbol terms (``IntVar``/``Param``/``Local``) and Proc-variable
    names to values and takes precedence over ``state``.  Primed symbols read
    from ``nxt``.  ``bound`` is an inclusive ``(lo, hi)`` search range for
    ``ExistsInt``.
    """
    return _Evaluator(state, env or {}, nxt, bound).form(f)


class _Evaluator:
    def __init__(self, state, env, nxt, bound):
        self.state = state
        self.env = dict(env)
        self.nxt = nxt
        self.bound = bound
        self.card_cache = {}

    def _src(self, primed, what):
        if not primed:
            return self.state
        if self.nxt is None:
            raise UnboundSymbol(f"primed {what} without a successor state")
        return self.nxt

    def term(self, t):
        env = self.env
        if isinstance(t, Num):
            return t.value
        if isinstance(t, (IntVar, Param, Local)):
            if t in env:
                return env[t]
            if isinstance(t, IntVar):
                src = self._src(t.primed, show(t))
                if t.name in src.ints:
                    return src.ints[t.name]
            elif isinstance(t, Param):
                if t.name in self.state.params:
                    return self.state.params[t.name]
            raise UnboundSymbol(show(t))
        if isinstance(t, ArrayRead):
            src = self._src(t.primed, show(t))
            try:
                return src.arrays[t.array][env[t.var]]
            except KeyError:
                raise UnboundSymbol(show(t)) from None
        if isinstance(t, Add):
            return self.term(t.left) + self.term(t.right)
        if isinstance(t, Sub):
            return self.term(t.left) - self.term(t.right)
        if isinstance(t, Mul):
            return t.coeff * self.term(t.term)
        if isinstance(t, FloorDiv):
            return self.term(t.term) // t.divisor
        if isinstance(t, Card):
            key = (t, tuple(sorted((k, v) for k, v in env.items() if isinstance(k, str))))
            if key not in self.card_cache:
                saved = env.get(t.var, None)
                count = 0
                for i in range(self.state.n):
                    env[t.var] = i
                    count += self.form(t.body)
                if saved is None:
                    env.pop(t.var, None)
                else:
                    env[t.var] = saved
                self.card_cache[key] = count
            return self.card_cache[key]
        raise TypeError(f"not a term: {t!r}")

    def _read(self, array, primed, var):
        src = self._src(primed, array)
        try:
            return src.arrays[array][self.env[var]]
        except KeyError:
            raise UnboundSymbol(f"{array}({var})") from None

    def form(self, f):
        if isinstance(f, Cmp):
            a, b = self.term(f.left), self.term(f.right)
            if f.op == "=":
                return a == b
            if f.op == "<":
                return a < b
            return a <= b
        if isinstance(f, Cong):
            return (self.term(f.left) - self.term(f.right)) % f.modulus == 0
        if isinstance(f, DataEq):
            return self._read(f.array, f.primed, f.var) == f.value
        if isinstance(f, DataEqArr):
            return self._read(f.left, f.left_primed, f.var) == self._read(f.right, f.right_primed, f.var)
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Not):
            return not self.form(f.arg)
        if isinstance(f, And):
            return all(self.form(a) for a in f.args)
        if isinstance(f, Or):
            return any(self.form(a) for a in f.args)
        if isinstance(f, ForallProc):
            saved = self.env.get(f.var)
            try:
                for i in range(self.state.n):
                    self.env[f.var] = i
                    if not self.form(f.body):
                        return False
                return True
            finally:
                if saved is None:
                    self.env.pop(f.var, None)
                else:
                    self.env[f.var] = saved
        if isinstance(f, ExistsInt):
            if self.bound is None:
                raise UnboundedExistential(f"no search bound for exists {f.var}")
            key = IntVar(f.var)
            saved = self.env.get(key)
            try:
                lo, hi = self.bound
                for v in range(lo, hi + 1):
                    self.env[key] = v
                    if self.form(f.body):
                        return True
                return False
            finally:
                if saved is None:
                    self.env.pop(key, None)
                else:
                    self.env[key] = saved
        raise TypeError(f"not a formula: {f!r}")
