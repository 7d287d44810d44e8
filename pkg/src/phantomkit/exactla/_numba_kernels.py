"""Compiled row-reduction kernel. Imported lazily; requires numba."""

import numba
import numpy as np


@numba.njit(cache=True)
def rref_inplace(a, p, inv):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        s = inv[a[r, c]]
        if s != 1:
            for j in range(c, cols):
                a[r, j] = a[r, j] * s % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]
