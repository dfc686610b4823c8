import json

import pytest

from counterabs.benchmarks import NAMES, ROOT, corpus, load_fixture
from counterabs.errors import UnknownBenchmark
from counterabs.frontend import load_spec_file, resolve_formula
from counterabs.runner import corpus_rows, resolve_target


def test_names():
    assert NAMES == ("ot", "ot_buggy", "srbp", "srbp_buggy", "bbp", "bbp_buggy")


def test_unknown():
    with pytest.raises(UnknownBenchmark):
        load_fixture("nosuch")


@pytest.mark.parametrize("name", NAMES)
def test_fixture_loads(name):
    fx = load_fixture(name)
    assert fx.spec_file.exists() and fx.spec_file.parent == ROOT / name
    assert fx.properties
    for path in fx.spec_files():
        spec = load_spec_file(path)
        assert spec.counters
    for p in fx.properties:
        spec = load_spec_file(p.spec_file)
        resolve_formula(spec, p.bad)
        if p.init:
            resolve_formula(spec, p.init)
        assert p.expected in ("sat", "unsat")


def test_buggy_expect_unsafe():
    for name in NAMES:
        if name.endswith("_buggy"):
            assert {p.expected for p in load_fixture(name).properties} == {"unsat"}


def test_only_ot_verified():
    assert load_fixture("ot").verified_reference
    for name in NAMES:
        if name != "ot":
            fx = load_fixture(name)
            assert not fx.verified_reference
            raw = json.loads((ROOT / name / "expected.json").read_text())
            assert raw["verified_reference"] is False


def test_ot_expected_texts():
    phi, iota, tau = load_fixture("ot").expected_texts()
    assert phi == "true"
    assert len(tau) == 7
    assert "{" not in iota and all("{" not in t for t in tau)


def test_get_property():
    fx = load_fixture("ot")
    assert fx.get_property("agreement").bad == "z00 + z01 > 0 & z10 + z11 > 0"
    assert fx.get_property("irrevocability").spec_file.name == "spec_irrevocability.cf"
    with pytest.raises(KeyError):
        fx.get_property("nosuch")


def test_corpus_rows():
    rows = corpus_rows()
    assert len(rows) == 12
    assert [b for b, _ in rows[:4]] == ["srbp"] * 4
    assert len(corpus_rows(buggy=True)) == 15
    assert {f.name for f in corpus()} == set(NAMES)


def test_resolve_target_by_name():
    t = resolve_target("ot", "irrevocability")
    assert t.spec_file.name == "spec_irrevocability.cf" and t.expected == "sat"
    t = resolve_target("ot", "agreement", unsafe="z00 > 0")
    assert t.bad == "z00 > 0" and t.expected is None
    with pytest.raises(FileNotFoundError):
        resolve_target("nosuch.cf")
    with pytest.raises(KeyError):
        resolve_target("ot", "nosuch")
