"""Dense exact linear algebra over F_p.

The row reduction kernel comes from the compiled ``_fastla`` extension when
it is importable and falls back to a numpy implementation otherwise.  Set
``QSTRAT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("QSTRAT_PURE"):
        raise ImportError("pure backend requested")
    from qstrat import _fastla
except ImportError:
    _fastla = None

BACKEND = "cython" if _fastla is not None else "python"


def _rref_python(a: np.ndarray, p: int) -> list[int]:
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.flatnonzero(a[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, p)
        if inv != 1:
            a[row, col:] = (a[row, col:] * inv) % p
        factors = a[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            a[np.ix_(hit, np.arange(col, ncols))] = (
                a[np.ix_(hit, np.arange(col, ncols))]
                - np.outer(factors[hit], a[row, col:])
            ) % p
        pivots.append(col)
        row += 1
    return pivots


def rref(m, p: int, backend: str | None = None) -> tuple[np.ndarray, list[int]]:
    """Return ``(R, pivots)`` with ``R`` the reduced row echelon form of ``m`` mod ``p``."""
    a = np.ascontiguousarray(np.asarray(m, dtype=np.int64) % p)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if a.size == 0:
        return a, []
    use = backend or BACKEND
    if use == "cython":
        if _fastla is None:
            raise RuntimeError("compiled kernel not available")
        pivots = _fastla.rref_inplace(a, p)
    else:
        pivots = _rref_python(a, p)
    return a[: len(pivots)].copy(), list(pivots)


def rank(m, p: int, backend: str | None = None) -> int:
    return len(rref(m, p, backend)[1])


def nullspace(m, p: int, ncols: int | None = None, backend: str | None = None) -> np.ndarray:
    """Canonical basis (as rows) of the right kernel of ``m`` over F_p.

    Basis vector ``k`` has a 1 at the k-th free column and 0 at every other
    free column, so coordinates of a kernel vector are read off its free
    columns.
    """
    m = np.asarray(m, dtype=np.int64)
    if ncols is None:
        ncols = m.shape[1]
    if m.size == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(m, p, backend)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, f]) % p
    return basis


def free_columns(basis: np.ndarray) -> list[int]:
    """Columns where a canonical nullspace basis is the identity."""
    cols = []
    for k in range(basis.shape[0]):
        nz = np.flatnonzero(basis[k])
        # the free column is the last nonzero entry of each canonical vector
        cols.append(int(nz[-1]))
    return cols


def span_contains(basis: np.ndarray, vecs, p: int) -> bool:
    """True iff every row of ``vecs`` lies in the row span of ``basis``."""
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % p
    if vecs.size == 0 or not vecs.any():
        return True
    if basis.size == 0:
        return False
    base = rank(basis, p)
    return rank(np.vstack([basis, vecs]), p) == base
