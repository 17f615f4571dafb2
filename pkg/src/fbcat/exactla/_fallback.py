"""Vectorised numpy implementation of the elimination kernels.

Used when the compiled extension is unavailable, or on request.
"""

import numpy as np


def rref_inplace(A, p):
    rows, cols = A.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others, c:] = (A[others, c:] - np.outer(col[others], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots


def rank_inplace(A, p):
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        below = A[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + r + 1
            A[idx, c:] = (A[idx, c:] - np.outer(A[idx, c], A[r, c:])) % p
        r += 1
    return r
