"""Row reduction over GF(p), the inner loop of every homology computation.

Two interchangeable paths: a numba @njit kernel and a vectorised numpy
fallback. Set TATEMODELS_NO_NUMBA=1 (or run without numba installed) to
force the numpy path.
"""

import os

import numpy as np

DTYPE = np.int64

_disabled = os.environ.get("TATEMODELS_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not _disabled


def _inverse_table(p):
    inv = np.zeros(p, dtype=DTYPE)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def rref_numpy(M, p):
    """Reduce M (modified in place) to reduced row echelon form mod p.

    Returns the pivot columns as an int64 array.
    """
    rows, cols = M.shape
    inv = _inverse_table(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k], c:] = M[[k, r], c:]
        a = M[r, c]
        if a != 1:
            M[r, c:] = (M[r, c:] * inv[a]) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit, c:] = (M[hit, c:] - np.outer(col[hit], M[r, c:])) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=DTYPE)


def _rref_loops(M, p, inv):
    rows, cols = M.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, cols):
                t = M[r, j]
                M[r, j] = M[k, j]
                M[k, j] = t
        a = inv[M[r, c]]
        if a != 1:
            for j in range(c, cols):
                M[r, j] = (M[r, j] * a) % p
        for i in range(rows):
            if i == r:
                continue
            f = M[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                M[i, j] = (M[i, j] - f * M[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


if USE_NUMBA:
    _rref_jit = numba.njit(cache=False)(_rref_loops)

    def rref_numba(M, p):
        return _rref_jit(M, p, _inverse_table(p))
else:  # pragma: no cover
    rref_numba = None


def rref_inplace(M, p):
    """Dispatch to the active kernel; M must be a C-contiguous int64 array."""
    if USE_NUMBA:
        return rref_numba(M, p)
    return rref_numpy(M, p)
