"""Numpy implementations of the grid kernels (fallback for the compiled core)."""
from __future__ import annotations

import itertools

import numpy as np

LE_KIND, EQ_KIND, CONG_KIND = 0, 1, 2
_CHUNK = 8192


def dnf_mask(points, coef, const, kind, mod, offsets):
    """Rows of ``points`` satisfying some disjunct of a compiled DNF.

    Constraint ``r`` is ``coef[r] . p + const[r]`` compared with zero
    according to ``kind[r]`` (``<= 0``, ``= 0`` or divisible by ``mod[r]``).
    Disjunct ``d`` owns the constraint rows ``offsets[d]:offsets[d + 1]``.
    """
    points = np.ascontiguousarray(points, dtype=np.int64)
    n = points.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    ndis = len(offsets) - 1
    if ndis == 0 or n == 0:
        return out
    safe_mod = np.where(mod > 0, mod, 1)
    for lo in range(0, n, _CHUNK):
        block = points[lo:lo + _CHUNK]
        vals = block @ coef.T + const
        ok = np.where(kind == LE_KIND, vals <= 0, np.where(kind == EQ_KIND, vals == 0, vals % safe_mod == 0))
        acc = out[lo:lo + _CHUNK]
        for d in range(ndis):
            a, b = offsets[d], offsets[d + 1]
            if a == b:
                acc[:] = True
                break
            acc |= ok[:, a:b].all(axis=1)
    return out


def compositions(total, parts):
    """All ``parts``-tuples of nonnegative integers summing to ``total``, lexicographic."""
    if parts == 0:
        return np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    rows = []
    # stars and bars: bar positions among total + parts - 1 slots
    slots = total + parts - 1
    for bars in itertools.combinations(range(slots), parts - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(slots - prev - 1)
        rows.append(row)
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), parts)
    order = np.lexsort(arr.T[::-1])
    return arr[order]
