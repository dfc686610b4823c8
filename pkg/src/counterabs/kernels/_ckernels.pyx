# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled grid kernels; same contracts as the numpy versions in ``_pykernels``."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def dnf_mask(points, coef, consts, kinds, mods, offsets):
    cdef i64[:, ::1] P = np.ascontiguousarray(points, dtype=np.int64)
    cdef i64[:, ::1] C = np.ascontiguousarray(coef, dtype=np.int64)
    cdef i64[::1] K = np.ascontiguousarray(consts, dtype=np.int64)
    cdef i64[::1] T = np.ascontiguousarray(kinds, dtype=np.int64)
    cdef i64[::1] M = np.ascontiguousarray(mods, dtype=np.int64)
    cdef i64[::1] O = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t n = P.shape[0], nv = P.shape[1], nd = O.shape[0] - 1
    out = np.zeros(n, dtype=np.bool_)
    cdef cnp.npy_bool[::1] res = out
    cdef Py_ssize_t i, d, r, j
    cdef i64 v, m
    cdef bint good
    with nogil:
        for i in range(n):
            for d in range(nd):
                good = True
                for r in range(O[d], O[d + 1]):
                    v = K[r]
                    for j in range(nv):
                        v = v + C[r, j] * P[i, j]
                    if T[r] == 0:
                        good = v <= 0
                    elif T[r] == 1:
                        good = v == 0
                    else:
                        m = M[r]
                        v = v % m
                        if v < 0:
                            v = v + m
                        good = v == 0
                    if not good:
                        break
                if good:
                    res[i] = True
                    break
    return out


def compositions(Py_ssize_t total, Py_ssize_t parts):
    if parts == 0:
        return np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    # number of rows: C(total + parts - 1, parts - 1)
    cdef Py_ssize_t count = 1, k
    for k in range(1, parts):
        count = count * (total + k) // k
    arr = np.zeros((count, parts), dtype=np.int64)
    cdef i64[:, ::1] A = arr
    cdef i64[::1] cur = np.zeros(parts, dtype=np.int64)
    cdef Py_ssize_t row = 0, p, rest
    cur[parts - 1] = total
    # lexicographic successor over compositions
    while True:
        for p in range(parts):
            A[row, p] = cur[p]
        row += 1
        if row == count:
            break
        # rightmost position with mass to its right moves up by one
        p = parts - 2
        while p >= 0:
            rest = 0
            for k in range(p + 1, parts):
                rest += cur[k]
            if rest > 0:
                break
            p -= 1
        cur[p] += 1
        rest -= 1
        for k in range(p + 1, parts):
            cur[k] = 0
        cur[parts - 1] = rest
    return arr

