import itertools

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from counterabs.logic import IntVar, Param
from counterabs.logic.linear import CONG, EQ, LE, Constraint, Lin, cong0, eq0, le0
from counterabs.presburger import (
    FALSE_SET, LinearConstraintSet, Policy, QEStats, cooper, eliminate, eliminate_int_var, fm_block, fm_real,
    try_substitution,
)
from qe_oracle import FREE_VALUES, W, X, Y, Z, disj_mask, exists_mask, set_mask


def L(*pairs, c=0):
    return Lin(pairs, c)


def S(*items):
    return LinearConstraintSet.make(items)


# ---------------------------------------------------------------- examples


def test_substitution_unit_equality():
    z00, z10 = IntVar("z00"), IntVar("z10")
    cs = S(eq0(L((X, 1), (z00, -1), (z10, -1))), le0(L((X, -1))))
    assert try_substitution(X, cs) == S(le0(L((z00, -1), (z10, -1))))


def test_substitution_absent_for_non_unit():
    assert try_substitution(X, S(eq0(L((X, 2), (Y, -1))))) is None


def test_substitution_zero_counter():
    z00, z01, zb0, n = IntVar("z00"), IntVar("z01"), IntVar("z_bot0"), Param("N")
    cs = S(eq0(L((z01, 1))), eq0(L((n, 1), (z00, -1), (z01, -1), (zb0, -1))))
    assert try_substitution(z01, cs) == S(eq0(L((n, 1), (z00, -1), (zb0, -1))))


def test_cooper_integer_gap():
    # exists x . y < x < z  <->  z - y >= 2
    cs = S(le0(L((Y, 1), (X, -1), c=1)), le0(L((X, 1), (Z, -1), c=1)))
    assert cooper(X, cs) == [S(le0(L((Y, 1), (Z, -1), c=2)))]


def test_cooper_parity():
    assert cooper(X, S(eq0(L((X, 2), (Y, -1))))) == [S(cong0(L((Y, 1)), 2))]


def test_cooper_unsat_and_untouched():
    assert cooper(X, FALSE_SET) == []
    cs = S(le0(L((Y, 1))))
    assert cooper(X, cs) == [cs]


def test_fm_real_interval_shadow():
    cs = S(le0(L((X, 2), (Z, -1))), le0(L((X, -2), (Y, 1))))
    assert fm_real(X, cs) == S(le0(L((Y, 1), (Z, -1))))


def test_fm_real_loses_parity():
    assert fm_real(X, S(eq0(L((X, 2), (Y, -1))))) == S()


def test_dispatch_substitution_is_exact():
    cs = S(eq0(L((X, 1), (Y, -1), (Z, -1))), le0(L((X, -1))))
    res, exact = eliminate_int_var(X, cs)
    assert exact and res == [try_substitution(X, cs)]


def test_dispatch_parity_exact():
    res, exact = eliminate_int_var(X, S(eq0(L((X, 2), (Y, -1)))))
    assert exact and res == [S(cong0(L((Y, 1)), 2))]


def test_dispatch_parity_relaxed():
    stats = QEStats()
    res, exact = eliminate_int_var(X, S(eq0(L((X, 2), (Y, -1)))), Policy.relax_on_budget(0), stats)
    assert not exact and res == [S()]
    assert stats.by_kind["fm_real"] == 1


def test_interval_projection():
    # exists u, v, w . z = u + v, u, v, w >= 0, u + v + w = N  ->  0 <= z <= N
    u, v, n = IntVar("u"), IntVar("v"), Param("N")
    cs = S(eq0(L((Z, 1), (u, -1), (v, -1))), le0(L((u, -1))), le0(L((v, -1))), le0(L((W, -1))),
           eq0(L((u, 1), (v, 1), (W, 1), (n, -1))))
    res, exact = eliminate({u, v, W}, [cs])
    assert exact
    assert res == [S(le0(L((Z, -1))), le0(L((Z, 1), (n, -1))))]


def test_zero_forced_first():
    a, b = IntVar("a"), IntVar("b")
    cs = S(eq0(L((a, 1), (b, 2))), le0(L((a, -1))), le0(L((b, -1))), le0(L((Y, 1), (a, -1))))
    stats = QEStats()
    res, _ = eliminate({a, b}, [cs], stats=stats)
    assert stats.by_kind["zero"] == 2
    assert res == [S(le0(L((Y, 1))))]


def test_fm_block_chernikov_keeps_meaning():
    # a chain x1 <= x2 <= x3 <= x4 between y and z; all intermediate variables go
    xs = [IntVar(f"x{i}") for i in range(4)]
    items = [le0(L((Y, 1), (xs[0], -1)))]
    items += [le0(L((xs[i], 1), (xs[i + 1], -1))) for i in range(3)]
    items += [le0(L((xs[3], 1), (Z, -1)))]
    assert fm_block(S(*items), set(xs)) == S(le0(L((Y, 1), (Z, -1))))


# --------------------------------------------------------- brute-force oracle

@st.composite
def constraint_sets(draw, keys=(X, Y, Z), max_size=4):
    n = draw(st.integers(1, max_size))
    items = []
    for _ in range(n):
        kind = draw(st.sampled_from([LE, LE, EQ, CONG]))
        coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(keys), max_size=len(keys)))
        if not coeffs[0]:
            coeffs[0] = draw(st.sampled_from([-3, -2, -1, 1, 2, 3]))
        expr = Lin(zip(keys, coeffs), draw(st.integers(-6, 6)))
        mod = draw(st.sampled_from([2, 3])) if kind == CONG else 0
        items.append(Constraint(kind, expr, mod))
    return LinearConstraintSet.make(items)


_FAST = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@_FAST
@given(constraint_sets())
def test_cooper_exact_against_brute_force(cs):
    assert np.array_equal(disj_mask(cooper(X, cs), FREE_VALUES), exists_mask(cs))


@_FAST
@given(constraint_sets())
def test_dispatch_exact_against_brute_force(cs):
    res, exact = eliminate_int_var(X, cs)
    assert exact
    assert np.array_equal(disj_mask(res, FREE_VALUES), exists_mask(cs))


@settings(max_examples=300, deadline=None)
@given(constraint_sets())
def test_cooper_implies_fm_real(cs):
    exact = disj_mask(cooper(X, cs), FREE_VALUES)
    shadow = set_mask(fm_real(X, cs), FREE_VALUES)
    assert not (exact & ~shadow).any()


# ------------------------------------------------------ order independence

SMALL = 6
_grid = np.arange(-SMALL, SMALL + 1)


def _two_var_oracle(cs):
    # exists x, w over a box that covers every witness for coefficients <= 2 and constants <= 4
    box = np.arange(-60, 61)
    xs, ws = np.meshgrid(box, box, indexing="ij")
    xs, ws = xs.ravel(), ws.ravel()
    out = np.zeros(len(_grid), dtype=bool)
    for i, y in enumerate(_grid):
        env = {X: xs, W: ws, Y: np.full_like(xs, y)}
        out[i] = set_mask(cs, env).any()
    return out


def _one_free(disjuncts):
    return disj_mask(disjuncts, {Y: _grid})


@st.composite
def two_var_sets(draw):
    n = draw(st.integers(1, 4))
    items = []
    for _ in range(n):
        kind = draw(st.sampled_from([LE, LE, EQ, CONG]))
        cx, cw, cy = (draw(st.integers(-2, 2)) for _ in range(3))
        expr = Lin(((X, cx), (W, cw), (Y, cy)), draw(st.integers(-4, 4)))
        items.append(Constraint(kind, expr, draw(st.sampled_from([2, 3])) if kind == CONG else 0))
    return LinearConstraintSet.make(items)


def _seq(first, second, cs):
    mid = []
    for d in cooper(first, cs):
        mid.extend(cooper(second, d))
    return mid


@settings(max_examples=200, deadline=None)
@given(two_var_sets())
def test_elimination_order_independent(cs):
    a = _one_free(_seq(X, W, cs))
    b = _one_free(_seq(W, X, cs))
    assert np.array_equal(a, b)
    assert np.array_equal(a, _two_var_oracle(cs))
    res, exact = eliminate({X, W}, [cs])
    assert exact and np.array_equal(_one_free(res), a)


@settings(max_examples=100, deadline=None)
@given(st.lists(two_var_sets(), min_size=1, max_size=4), st.randoms())
def test_eliminate_deterministic_under_permutation(sets, rnd):
    first, _ = eliminate({X, W}, sets)
    shuffled = list(sets)
    rnd.shuffle(shuffled)
    second, _ = eliminate({X, W}, shuffled)
    assert first == second


@settings(max_examples=200, deadline=None)
@given(constraint_sets())
def test_normalized_sets_have_no_zero_coefficients(cs):
    for c in cs.constraints:
        assert all(a != 0 for _, a in c.expr.terms)
        if c.kind == CONG:
            assert c.mod >= 2


def test_exhaustive_small_cooper():
    # every unit interval with a parity side condition, checked pointwise
    for lo, hi, m in itertools.product(range(-3, 4), range(-3, 4), (2, 3)):
        cs = S(le0(L((X, -1), (Y, 1), c=lo)), le0(L((X, 1), (Z, -1), c=hi)), cong0(L((X, 1), (Y, 1)), m))
        assert np.array_equal(disj_mask(cooper(X, cs), FREE_VALUES), exists_mask(cs))
