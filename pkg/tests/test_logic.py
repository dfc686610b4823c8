import pytest
from hypothesis import given, settings, strategies as st

from counterabs.errors import SortMismatch, UnboundedExistential, UnboundSymbol
from counterabs.frontend import parse_formula
from counterabs.logic import (
    FALSE, TRUE, Add, And, ArrayRead, Card, Cong, ConcreteState, DataEq, ExistsInt, ForallProc, IntVar, Mul,
    Not, Num, Or, Param, atoms_of, conj, disj, eq, evaluate, free_symbols, le, lt, prime_state, show, simplify,
    substitute,
)
from counterabs.logic.syntax import ArraySym


def test_free_symbols_init(ot_spec):
    assert free_symbols(ot_spec.iota()) == {Param("N"), ArraySym("A", False)}


def test_free_symbols_true():
    assert free_symbols(TRUE) == set()


def test_free_symbols_counter_definition(ot_spec):
    delta = eq(IntVar("z00"), ot_spec.counter("z00").card())
    assert free_symbols(delta) == {IntVar("z00"), ArraySym("A", False), ArraySym("V", False)}


def test_substitute_array_read():
    a = ArrayRead("a", "i")
    f = conj(le(Num(0), a), le(a, Param("N")))
    g = substitute(f, {a: IntVar("x")})
    assert g == conj(le(Num(0), IntVar("x")), le(IntVar("x"), Param("N")))


def test_substitute_identity(ot_spec):
    f = ot_spec.tau()
    assert substitute(f, {}) == f


def test_substitute_sort_mismatch():
    with pytest.raises(SortMismatch):
        substitute(TRUE, {ArrayRead("a", "i"): Num(3)})


def test_prime_counter_definition(ot_spec):
    delta = eq(IntVar("z00"), ot_spec.counter("z00").card())
    primed = prime_state(delta)
    assert show(primed) == "z00' = #{k | A'(k) = 0 & V'(k) = 0}"


def _state(n, a, v):
    return ConcreteState(n, {"N": n}, {}, {"A": tuple(a), "V": tuple(v)})


def test_eval_init(ot_spec):
    assert evaluate(ot_spec.iota(), _state(3, [0, 0, 0], [0, 1, 0]))
    assert not evaluate(ot_spec.iota(), _state(2, [0, 0], [0, 1]))


def test_eval_counter_definition(ot_spec):
    # A = [0, bot, 0], V = [0, 1, 0]: indices 0 and 2 have A = 0 and V = 0
    a = [1, 0, 1]  # value indices in Acc = {bot, 0, 1}
    delta = eq(IntVar("z00"), ot_spec.counter("z00").card())
    assert evaluate(delta, _state(3, a, [0, 1, 0]), {IntVar("z00"): 2})
    assert not evaluate(delta, _state(3, a, [0, 1, 0]), {IntVar("z00"): 1})


def test_eval_unbound():
    with pytest.raises(UnboundSymbol):
        evaluate(lt(IntVar("x"), Num(1)), _state(1, [0], [0]))


def test_eval_exists_needs_bound():
    f = ExistsInt("y", eq(Mul(2, IntVar("y")), IntVar("x")))
    s = _state(1, [0], [0])
    with pytest.raises(UnboundedExistential):
        evaluate(f, s, {IntVar("x"): 4})
    assert evaluate(f, s, {IntVar("x"): 4}, bound=(-10, 10))
    assert not evaluate(f, s, {IntVar("x"): 5}, bound=(-10, 10))


def test_simplify_examples():
    x = IntVar("x")
    assert simplify(lt(x, x)) == FALSE
    p = lt(x, Num(3))
    assert simplify(And((TRUE, p))) == p
    a0, a1 = DataEq("A", False, "x", 1), DataEq("A", False, "x", 2)
    assert simplify(And((a0, a1))) == FALSE
    assert simplify(Or((a0, Not(a0)))) == TRUE
    assert simplify(le(Num(1), Num(2))) == TRUE


def test_atoms_of():
    x, y = IntVar("x"), IntVar("y")
    p = lt(x, y)
    assert atoms_of(TRUE) == []
    assert atoms_of(And((p, p))) == [p]
    # x < y and y <= x are one atom up to polarity
    assert atoms_of(Or((p, le(y, x)))) == [p]


def test_atoms_of_deterministic(ot_spec):
    f = ot_spec.tau()
    assert [show(a) for a in atoms_of(f)] == [show(a) for a in atoms_of(f)]
    assert len(atoms_of(f)) > 5


# ------------------------------------------------------------- properties

X, Y = IntVar("x"), IntVar("y")
N = Param("N")
_terms_base = [X, Y, N, Num(0), Num(1), Num(-2), ArrayRead("R", "i"),
               Card("k", DataEq("A", False, "k", 1)), Card("k", Or((DataEq("A", False, "k", 0), DataEq("B", False, "k", 1))))]


def _term():
    base = st.sampled_from(_terms_base)
    return st.recursive(base, lambda t: st.one_of(
        st.builds(Add, t, t), st.builds(lambda c, u: Mul(c, u), st.integers(-3, 3), t)), max_leaves=3)


def _atom():
    return st.one_of(
        st.builds(lambda op, a, b: {"=": eq, "<": lt, "<=": le}[op](a, b), st.sampled_from(["=", "<", "<="]), _term(), _term()),
        st.builds(lambda a, b, m: Cong(a, b, m), _term(), _term(), st.sampled_from([2, 3])),
        st.builds(lambda arr, v: DataEq(arr, False, "i", v), st.sampled_from(["A", "B"]), st.integers(0, 2)),
        st.sampled_from([TRUE, FALSE]),
    )


def _formula():
    return st.recursive(_atom(), lambda f: st.one_of(
        st.builds(lambda a, b: conj(a, b), f, f),
        st.builds(lambda a, b: And((a, b)), f, f),
        st.builds(lambda a, b: disj(a, b), f, f),
        st.builds(lambda a, b: Or((a, b)), f, f),
        st.builds(Not, f),
    ), max_leaves=10)


@st.composite
def _model(draw):
    n = draw(st.integers(1, 5))
    vals = st.integers(-10, 10)
    arrays = {
        "A": tuple(draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))),
        "B": tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))),
        "R": tuple(draw(st.lists(vals, min_size=n, max_size=n))),
    }
    s = ConcreteState(n, {"N": n}, {}, arrays)
    env = {X: draw(vals), Y: draw(vals), "i": draw(st.integers(0, n - 1))}
    return s, env


@settings(max_examples=400, deadline=None)
@given(_formula(), _model())
def test_simplify_preserves_eval(f, model):
    s, env = model
    assert evaluate(simplify(f), s, env) == evaluate(f, s, env)


@settings(max_examples=200, deadline=None)
@given(_formula(), _model())
def test_simplify_preserves_eval_under_forall(f, model):
    s, env = model
    g = ForallProc("i", f)
    env = {k: v for k, v in env.items() if k != "i"}
    assert evaluate(simplify(g), s, env) == evaluate(g, s, env)


@settings(max_examples=300, deadline=None)
@given(_formula(), _term(), _model())
def test_substitute_commutes_with_eval(f, t, model):
    s, env = model
    from counterabs.logic import eval_term

    value = eval_term(t, s, env)
    lhs = evaluate(substitute(f, {X: t}), s, env)
    rhs = evaluate(f, s, {**env, X: value})
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(_formula())
def test_atoms_of_stable(f):
    assert [show(a) for a in atoms_of(f)] == [show(a) for a in atoms_of(f)]


def test_parse_formula_matches_constructors():
    f = parse_formula("x + 1 < y & !(y = 2)")
    assert show(f) == "x + 1 < y & !(y = 2)"
