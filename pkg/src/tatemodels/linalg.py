"""Dense linear algebra over GF(p) built on the row-reduction kernel.

Maps are stored in column convention: ``M[target_index, source_index]``.
"""

from __future__ import annotations

import numpy as np

from ._kernels import DTYPE, rref_inplace


def as_matrix(rows, ncols):
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=DTYPE)
    return np.ascontiguousarray(np.asarray(rows, dtype=DTYPE).reshape(len(rows), ncols))


def rref(M, p):
    """Return (R, pivots) with R the reduced row echelon form of M mod p."""
    R = np.ascontiguousarray(M, dtype=DTYPE) % p
    if R.size == 0:
        return R, np.zeros(0, dtype=DTYPE)
    pivots = rref_inplace(R, p)
    return R[: len(pivots)], pivots


def rank(M, p) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p):
    """Rows form a basis of {v : M v = 0}, in reduced echelon shape."""
    rows, cols = M.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=DTYPE)
    R, piv = rref(M, p) if rows else (np.zeros((0, cols), dtype=DTYPE), np.zeros(0, dtype=DTYPE))
    pivset = set(int(c) for c in piv)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=DTYPE)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = (-R[r, f]) % p
    return out


def row_space(M, p):
    """Reduced echelon basis (rows) of the row space of M."""
    if M.shape[0] == 0:
        return np.zeros((0, M.shape[1]), dtype=DTYPE)
    return rref(M, p)[0]


def column_space(M, p):
    """Basis of the image of M as rows (vectors in the target)."""
    return row_space(np.ascontiguousarray(M.T), p)


def independent_extension(span_rows, candidates, p):
    """Indices of candidates picked greedily, in order, independent modulo span_rows.

    Pivot columns of the matrix whose columns are [span..., candidates...]
    give the lexicographically first basis, so one reduction suffices.
    """
    n_span = span_rows.shape[0]
    if candidates.shape[0] == 0:
        return []
    stacked = np.vstack([span_rows, candidates]) if n_span else candidates
    _, piv = rref(np.ascontiguousarray(stacked.T), p)
    return [int(c) - n_span for c in piv if c >= n_span]


def solve(A, B, p):
    """Particular solution X of A X = B (free variables zero), or None.

    B may be a vector or a matrix of right-hand sides.
    """
    vec = B.ndim == 1
    B2 = B.reshape(-1, 1) if vec else B
    rows, cols = A.shape
    if rows == 0:
        X = np.zeros((cols, B2.shape[1]), dtype=DTYPE)
        return X[:, 0] if vec else X
    aug = np.ascontiguousarray(np.hstack([A, B2]), dtype=DTYPE) % p
    R, piv = rref(aug, p)
    if len(piv) and piv[-1] >= cols:
        return None
    X = np.zeros((cols, B2.shape[1]), dtype=DTYPE)
    for r, c in enumerate(piv):
        X[c] = R[r, cols:]
    return X[:, 0] if vec else X


def in_span(span_rows, v, p) -> bool:
    if not np.any(v % p):
        return True
    if span_rows.shape[0] == 0:
        return False
    return rank(np.vstack([span_rows, v.reshape(1, -1)]), p) == rank(span_rows, p)
