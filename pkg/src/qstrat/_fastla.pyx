# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over a prime field.

Entries are int64 in ``[0, p)``; ``p`` must be small enough that ``p*p``
fits in 63 bits.
"""

import numpy as np
from libc.stdint cimport int64_t


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    # extended Euclid; a is nonzero mod p
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _rref(int64_t[:, ::1] a, int64_t p, Py_ssize_t[::1] pivots) nogil:
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t row = 0, col, r, c, piv
    cdef int64_t inv, f, tmp
    for col in range(ncols):
        if row >= nrows:
            break
        piv = -1
        for r in range(row, nrows):
            if a[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            for c in range(col, ncols):
                tmp = a[piv, c]
                a[piv, c] = a[row, c]
                a[row, c] = tmp
        inv = _inv(a[row, col], p)
        if inv != 1:
            for c in range(col, ncols):
                a[row, c] = (a[row, c] * inv) % p
        for r in range(nrows):
            if r == row:
                continue
            f = a[r, col]
            if f == 0:
                continue
            for c in range(col, ncols):
                if a[row, c] != 0:
                    a[r, c] = (a[r, c] - f * a[row, c]) % p
                    if a[r, c] < 0:
                        a[r, c] += p
        pivots[row] = col
        row += 1
    return row


def rref_inplace(int64_t[:, ::1] a, int64_t p):
    """Reduce ``a`` to reduced row echelon form in place; return pivot columns."""
    cdef Py_ssize_t n = min(a.shape[0], a.shape[1])
    cdef Py_ssize_t[::1] pivots = np.empty(max(n, 1), dtype=np.intp)
    cdef Py_ssize_t rank
    with nogil:
        rank = _rref(a, p, pivots)
    return [pivots[i] for i in range(rank)]
