"""Venn-region cells over the enumerated arrays and their linear encodings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import CellBudgetExceeded
from ..logic.linear import EQ, LE, Constraint, Lin
from ..logic.syntax import And, DataEq, DataEqArr, FalseF, IntVar, Not, Or, Param, TrueF

INIT_SCOPE = "init"
TRANS_SCOPE = "trans"
DEFAULT_CELL_BUDGET = 4096


def data_holds(f, valuation):
    """Truth of a Data-formula under a complete valuation ``(array, primed) -> index``."""
    if isinstance(f, DataEq):
        return valuation[(f.array, f.primed)] == f.value
    if isinstance(f, DataEqArr):
        return valuation[(f.left, f.left_primed)] == valuation[(f.right, f.right_primed)]
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Not):
        return not data_holds(f.arg, valuation)
    if isinstance(f, And):
        return all(data_holds(a, valuation) for a in f.args)
    if isinstance(f, Or):
        return any(data_holds(a, valuation) for a in f.args)
    raise TypeError(f"not a Data-formula: {f!r}")


def data_arrays(f):
    """``(array, primed)`` pairs read by a Data-formula, sorted."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, DataEq):
            out.add((g.array, g.primed))
        elif isinstance(g, DataEqArr):
            out.add((g.left, g.left_primed))
            out.add((g.right, g.right_primed))
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
    return sorted(out)


def truth_table(f, arrays, sizes):
    """Satisfying valuations of ``f`` over the ordered ``arrays`` as a frozenset of tuples."""
    out = set()
    for combo in itertools.product(*(range(sizes[a]) for a in arrays)):
        if data_holds(f, dict(zip(arrays, combo))):
            out.add(combo)
    return frozenset(out)


@dataclass(frozen=True)
class Cell:
    index: int
    valuation: tuple  # ((array, primed, value index), ...) in canonical order

    @property
    def symbol(self):
        return IntVar(f"_c{self.index}")

    def as_dict(self):
        return {(a, p): v for a, p, v in self.valuation}


@dataclass(frozen=True)
class CellSpace:
    scope: str
    arrays: tuple  # ((name, primed), ...) canonical order
    cells: tuple

    def __len__(self):
        return len(self.cells)

    def symbols(self):
        return [c.symbol for c in self.cells]

    def satisfying(self, f):
        return [c for c in self.cells if data_holds(f, c.as_dict())]


def build_cells(spec, scope, budget=DEFAULT_CELL_BUDGET):
    """Full product of the enumerated arrays in scope (primed copies for transitions)."""
    arrays = []
    for a in sorted(spec.enumerated, key=lambda a: a.name):
        arrays.append((a.name, False))
        if scope == TRANS_SCOPE:
            arrays.append((a.name, True))
    arrays.sort()
    sizes = [spec.sort_size(name) for name, _ in arrays]
    total = 1
    for s in sizes:
        total *= s
    if total > budget:
        raise CellBudgetExceeded(f"{total} cells needed for scope '{scope}', budget is {budget}")
    cells = []
    for i, combo in enumerate(itertools.product(*(range(s) for s in sizes))):
        cells.append(Cell(i, tuple((a, p, v) for (a, p), v in zip(arrays, combo))))
    return CellSpace(scope, tuple(arrays), tuple(cells))


def counters_as_cell_sums(defs, cs):
    """``z = sum of cells satisfying the body`` for each ``(symbol, body)`` in ``defs``."""
    out = []
    for sym, body in defs:
        e = Lin.of(sym)
        for c in cs.satisfying(body):
            e = e - Lin.of(c.symbol)
        out.append(Constraint(EQ, e))
    return out


def encode_forall_data(theta, cs, n=Param("N")):
    """Linear encoding of ``forall k . theta(k)`` over the cell space.

    Returns ``N = sum(eps_f z_f)``, the partition law and ``z_f >= 0``.
    """
    sat = {c.index for c in cs.satisfying(theta)}
    e_theta = Lin.of(n)
    e_all = Lin.of(n)
    for c in cs.cells:
        e_all = e_all - Lin.of(c.symbol)
        if c.index in sat:
            e_theta = e_theta - Lin.of(c.symbol)
    out = [Constraint(EQ, e_theta), Constraint(EQ, e_all)]
    out.extend(Constraint(LE, Lin.of(c.symbol, -1)) for c in cs.cells)
    return out
