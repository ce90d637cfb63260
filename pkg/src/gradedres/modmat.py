"""Dense linear algebra over F_p on numpy int64 arrays.

Matrices are 2-d arrays with entries reduced to [0, p).  All routines are
deterministic (no pivoting beyond first-nonzero) so downstream output is
reproducible.
"""

from __future__ import annotations

import numpy as np


def asmat(rows, p):
    """Build a reduced matrix from an iterable of rows (possibly empty)."""
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape((0, 0)) if a.size == 0 else a.reshape((1, -1))
    return a % p


def rref(a, p):
    """Row-reduce a copy of ``a`` mod p; returns (reduced matrix, pivot columns)."""
    m = (a % p).astype(np.int64).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p):
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p):
    """Basis of the right nullspace of ``a`` as rows of the returned matrix."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-int(r[i, fc])) % p
    return basis


def solve(a, b, p):
    """One solution x of a @ x = b mod p, or None.  ``b`` is a 1-d vector."""
    rows, cols = a.shape
    aug = np.concatenate([a % p, (np.asarray(b, dtype=np.int64) % p).reshape(-1, 1)], axis=1)
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def is_invertible(a, p):
    rows, cols = a.shape
    return rows == cols and (rows == 0 or rank(a, p) == rows)


def in_rowspace(v, basis_rref, pivots, p):
    """Whether vector v lies in the row space given by an rref basis."""
    v = (np.asarray(v, dtype=np.int64) % p).copy()
    for i, pc in enumerate(pivots):
        if v[pc]:
            v = (v - v[pc] * basis_rref[i]) % p
    return not v.any()
