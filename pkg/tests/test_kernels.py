import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from math import comb

from counterabs import kernels
from counterabs.kernels import pure

try:
    from counterabs.kernels import _ckernels as compiled
except ImportError:  # pragma: no cover - build without a C compiler
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
BACKENDS = [pure] + ([compiled] if compiled is not None else [])


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None:
        assert kernels.BACKEND == "cython" or __import__("os").environ.get("COUNTERABS_PURE")


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("total,parts", [(0, 0), (3, 0), (0, 3), (3, 1), (4, 3), (6, 6)])
def test_compositions(impl, total, parts):
    rows = impl.compositions(total, parts)
    expected = comb(total + parts - 1, parts - 1) if parts else int(total == 0)
    assert rows.shape == (expected, parts)
    if parts:
        assert (rows.sum(axis=1) == total).all() and (rows >= 0).all()
        assert [tuple(r) for r in rows] == sorted(tuple(r) for r in rows)


@needs_compiled
@pytest.mark.parametrize("total,parts", [(0, 1), (5, 2), (4, 6), (7, 4)])
def test_compositions_agree(total, parts):
    assert np.array_equal(pure.compositions(total, parts), compiled.compositions(total, parts))


@st.composite
def compiled_dnf(draw):
    nv = draw(st.integers(1, 4))
    sizes = draw(st.lists(st.integers(0, 4), min_size=0, max_size=4))
    rows = sum(sizes)
    coef = np.array(draw(st.lists(st.lists(st.integers(-3, 3), min_size=nv, max_size=nv),
                                  min_size=rows, max_size=rows)), dtype=np.int64).reshape(rows, nv)
    const = np.array(draw(st.lists(st.integers(-5, 5), min_size=rows, max_size=rows)), dtype=np.int64)
    kind = np.array(draw(st.lists(st.integers(0, 2), min_size=rows, max_size=rows)), dtype=np.int64)
    mod = np.where(kind == 2, np.array(draw(st.lists(st.integers(2, 4), min_size=rows, max_size=rows)),
                                       dtype=np.int64).reshape(rows), 0)
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    npts = draw(st.integers(0, 40))
    points = np.array(draw(st.lists(st.lists(st.integers(-6, 6), min_size=nv, max_size=nv),
                                    min_size=npts, max_size=npts)), dtype=np.int64).reshape(npts, nv)
    return points, coef, const, kind, mod, offsets


def _reference(points, coef, const, kind, mod, offsets):
    out = []
    for p in points:
        hit = False
        for d in range(len(offsets) - 1):
            ok = True
            for r in range(offsets[d], offsets[d + 1]):
                v = int(coef[r] @ p) + int(const[r])
                ok = ok and (v <= 0 if kind[r] == 0 else v == 0 if kind[r] == 1 else v % mod[r] == 0)
            hit = hit or ok
        out.append(hit)
    return np.array(out, dtype=bool)


@settings(max_examples=300, deadline=None)
@given(compiled_dnf())
def test_dnf_mask_matches_reference(args):
    ref = _reference(*args)
    for impl in BACKENDS:
        assert np.array_equal(impl.dnf_mask(*args), ref)
