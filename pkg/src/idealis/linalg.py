"""Exact linear algebra: generic field rref/kernel plus a vectorized F_p path.

The generic routines work on lists of lists of field elements and are used
for Q and Q(sqrt(d)) instances; the numpy routines carry the large modular
interpolation matrices (entries are int64, valid for p < 2^31).
"""

from __future__ import annotations

import numpy as np

_NUMPY_PRIME_LIMIT = 1 << 31


def rref(rows, field):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if not field.is_zero(mat[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(v, inv) for v in mat[r]]
        for i in range(len(mat)):
            if i != r and not field.is_zero(mat[i][c]):
                factor = mat[i][c]
                row = mat[i]
                pivrow = mat[r]
                mat[i] = [
                    field.sub(row[j], field.mul(factor, pivrow[j]))
                    for j in range(ncols)
                ]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r] + mat[r:], pivots


def rank(rows, field):
    return len(rref(rows, field)[1])


def kernel_basis(rows, ncols, field):
    """Canonical kernel basis: one vector per free column, free entry = 1."""
    reduced, pivots = rref(rows, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(reduced[i][fc])
        basis.append(vec)
    return basis


def solve_homogeneous_unique(rows, ncols, field):
    """Kernel expected to be a line; returns the unique normalized vector or None."""
    basis = kernel_basis(rows, ncols, field)
    if len(basis) != 1:
        return None
    vec = basis[0]
    for v in vec:
        if not field.is_zero(v):
            inv = field.inv(v)
            return [field.mul(inv, w) for w in vec]
    return None


# -- F_p fast path -----------------------------------------------------------


def _check_prime(p):
    if p >= _NUMPY_PRIME_LIMIT:
        raise ValueError(f"numpy modular path requires p < 2^31, got {p}")


def rref_mod(mat, p):
    """In-place-style rref over F_p on an int64 array; returns (mat, pivots)."""
    _check_prime(p)
    mat = np.array(mat, dtype=np.int64) % p
    if mat.size == 0:
        return mat, []
    nrows, ncols = mat.shape
    pivots = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(mat[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            mat[[r, i]] = mat[[i, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r] = mat[r] * inv % p
        col = mat[:, c].copy()
        col[r] = 0
        hot = np.nonzero(col)[0]
        if hot.size:
            mat[hot] = (mat[hot] - np.outer(col[hot], mat[r])) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rank_mod(mat, p):
    return len(rref_mod(mat, p)[1])


def kernel_mod(mat, p):
    """Canonical kernel basis over F_p as a (k, ncols) int64 array."""
    _check_prime(p)
    mat = np.array(mat, dtype=np.int64)
    if mat.size == 0:
        ncols = mat.shape[1] if mat.ndim == 2 else 0
        return np.eye(ncols, dtype=np.int64)
    reduced, pivots = rref_mod(mat, p)
    ncols = mat.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for row, fc in enumerate(free):
        basis[row, fc] = 1
        for i, pc in enumerate(pivots):
            basis[row, pc] = (-int(reduced[i, fc])) % p
    return basis
