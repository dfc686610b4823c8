import pytest
from hypothesis import given, settings, strategies as st

from counterabs.errors import (
    DuplicateDeclaration, FragmentViolation, MultipleInitCases, NonConstantDivisor, SortMismatch,
    SpecSyntaxError, UnknownSymbol,
)
from counterabs.frontend import desugar_floor_div, load_spec, parse_spec, print_spec, validate
from counterabs.logic import ConcreteState, Local, evaluate, show

HEADER = """params: N;
sorts: Val = {v0, v1}; Acc = {bot, a0, a1};
arrays: V : Val; A : Acc; R0 : int; R1 : int;
counters: z0 = #{k | V(k) = v0}; z1 = #{k | V(k) = v1};
"""


def spec_with(init="forall x . A(x) = bot", trans="forall i . V'(i) = V(i)", unsafe="z0 > 0", counters=None):
    head = HEADER if counters is None else HEADER.split("counters:")[0] + "counters: " + counters + "\n"
    return head + f"init: {init};\ntrans: {trans};\nunsafe: {unsafe};\n"


def test_parse_ot(ot):
    ps = parse_spec(ot.spec_file.read_text())
    assert [p.name for p in ps.params] == ["N"]
    arrays = {a.name: a.sort for a in ps.arrays}
    assert arrays == {"V": "Val", "A": "Acc", "R0": "int", "R1": "int"}
    assert len(ps.counters) == 6
    spec = validate(ps)
    assert [a.name for a in spec.enumerated] == ["V", "A"]
    assert spec.sort_size("V") == 2 and spec.sort_size("A") == 3


def test_empty_file():
    with pytest.raises(SpecSyntaxError, match="expected section 'params'"):
        parse_spec("")


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as e:
        parse_spec("params: N;\narrays: V : ;\n")
    assert e.value.line == 2


def test_counter_over_arith_array_rejected_late():
    text = spec_with(counters="z0 = #{k | R0(k) = 0}; z1 = #{k | V(k) = v1};")
    ps = parse_spec(text)
    assert len(ps.counters) == 2
    with pytest.raises(FragmentViolation):
        validate(ps)


def test_two_proc_vars_rejected():
    with pytest.raises(FragmentViolation):
        load_spec(spec_with(trans="forall i . V'(i) = V(i) & A(x) = A(y)"))


def test_unsafe_with_array_rejected():
    with pytest.raises(FragmentViolation):
        load_spec(spec_with(unsafe="V(x) = v0"))


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        load_spec(spec_with(unsafe="zz > 0"))


def test_sort_mismatch():
    with pytest.raises(SortMismatch):
        load_spec(spec_with(init="forall x . A(x) = v0"))


def test_multiple_init_cases():
    with pytest.raises(MultipleInitCases):
        load_spec(spec_with(init="forall x . A(x) = bot; forall x . A(x) = a0"))


def test_duplicate_declaration():
    with pytest.raises(DuplicateDeclaration):
        parse_spec(HEADER.replace("R1 : int", "R0 : int") + "init: forall x . true;\ntrans: forall i . true;\n")


def test_missing_n():
    with pytest.raises(FragmentViolation):
        load_spec(spec_with().replace("params: N;", "params: M;"))


def test_desugar_ot_threshold(ot_raw, ot_spec):
    assert ot_raw.derived == ()
    assert [d.name for d in ot_spec.derived] == ["_t0"]
    d = ot_spec.derived[0]
    assert show(d.term) == "2*N" and d.divisor == 3
    body = show(ot_spec.trans[0].body)
    assert "div" not in body
    assert "3*_t0 <= 2*N" in body and "2*N < 3*_t0 + 3" in body


def test_desugar_identity_without_division():
    spec = load_spec(spec_with(), desugar=False)
    assert desugar_floor_div(spec) is spec


def test_zero_divisor():
    with pytest.raises(NonConstantDivisor):
        load_spec(spec_with(unsafe="z0 > N div 0"))


def test_non_numeral_divisor_is_syntax_error():
    with pytest.raises((SpecSyntaxError, NonConstantDivisor)):
        load_spec(spec_with(unsafe="z0 > N div z1"))


# ----------------------------------------------------------- print/parse


_ARITH = ["z0", "z1", "N", "R0'(i)", "R1'(i)", "(2*N) div 3", "#{k | V(k) = v0 & A(k) != bot}", "3", "0"]
_DATA = ["V(i) = v0", "V'(i) = v1", "A(i) = bot", "A'(i) = A(i)", "V'(i) != V(i)"]


def _formulas():
    atom = st.one_of(
        st.sampled_from(_DATA),
        st.builds(lambda a, op, b: f"{a} {op} {b}", st.sampled_from(_ARITH),
                  st.sampled_from(["=", "<", "<=", ">", ">=", "!="]), st.sampled_from(_ARITH)),
        st.builds(lambda a, b, m: f"{a} = {b} (mod {m})", st.sampled_from(_ARITH[:5]), st.sampled_from(_ARITH[:5]),
                  st.sampled_from([2, 3])),
    )
    return st.recursive(
        atom,
        lambda sub: st.one_of(
            st.builds(lambda a, b: f"({a} & {b})", sub, sub),
            st.builds(lambda a, b: f"({a} | {b})", sub, sub),
            st.builds(lambda a: f"!({a})", sub),
        ),
        max_leaves=8,
    )


@settings(max_examples=150, deadline=None)
@given(_formulas(), _formulas())
def test_print_parse_fixpoint(f, g):
    text = spec_with(trans=f"forall i . {f}; forall i . {g}", init="forall x . A(x) = bot & N > 2")
    ps = parse_spec(text)
    again = parse_spec(print_spec(ps))
    assert again == ps
    assert print_spec(again) == print_spec(ps)


def test_print_parse_fixpoint_corpus(ot):
    for path in ot.spec_files():
        ps = parse_spec(path.read_text())
        assert parse_spec(print_spec(ps)) == ps


# ------------------------------------------------------ desugar semantics


def _local_witnesses(f):
    return sorted({s.name for s in __import__("counterabs.logic", fromlist=["free_symbols"]).free_symbols(f)
                   if isinstance(s, Local)})


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_desugar_preserves_semantics(ot_raw, ot_spec, data):
    n = data.draw(st.integers(1, 9), label="N")
    vals = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    accs = st.lists(st.integers(0, 2), min_size=n, max_size=n)
    reads = st.lists(st.integers(0, n), min_size=n, max_size=n)
    s = ConcreteState(n, {"N": n}, {}, {"V": tuple(data.draw(vals)), "A": tuple(data.draw(accs)),
                                        "R0": tuple(data.draw(reads)), "R1": tuple(data.draw(reads))})
    s2 = ConcreteState(n, {"N": n}, {}, {"V": tuple(data.draw(vals)), "A": tuple(data.draw(accs)),
                                         "R0": tuple(data.draw(reads)), "R1": tuple(data.draw(reads))})
    i = data.draw(st.integers(0, n - 1), label="i")
    before = ot_raw.trans[0]
    after = ot_spec.trans[0]
    truth = evaluate(before.body, s, {before.var: i}, s2)
    names = _local_witnesses(after.body)
    assert names == ["_t0"]
    # the witness is existentially projected away over a covering range
    witnessed = any(evaluate(after.body, s, {after.var: i, Local("_t0"): t}, s2) for t in range(-2, 2 * n + 2))
    assert truth == witnessed
