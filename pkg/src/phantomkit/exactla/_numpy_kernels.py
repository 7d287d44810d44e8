"""Vectorised numpy row reduction; the fallback when numba is off."""

import numpy as np


def rref_inplace(a, p, inv):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        s = inv[a[r, c]]
        if s != 1:
            a[r] = a[r] * s % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)
