# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gauss-Jordan elimination over a prime field.

Entries are int64 residues in [0, p). Products of two residues must fit in
int64, so p < 2**31 is required (callers enforce a tighter bound).
"""

ctypedef long long i64


cdef inline i64 _inv_mod(i64 a, i64 p) nogil:
    cdef i64 result = 1
    cdef i64 e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = (result * a) % p
        a = (a * a) % p
        e >>= 1
    return result


def rref_inplace(i64[:, ::1] A, i64 p):
    """Reduce ``A`` to reduced row echelon form in place; return pivot columns."""
    cdef Py_ssize_t rows = A.shape[0]
    cdef Py_ssize_t cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, factor, tmp
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                A[r, j] = (A[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            factor = A[i, c]
            if factor == 0:
                continue
            factor = p - factor
            for j in range(c, cols):
                if A[r, j] != 0:
                    A[i, j] = (A[i, j] + factor * A[r, j]) % p
        pivots.append(c)
        r += 1
    return pivots


def rank_inplace(i64[:, ::1] A, i64 p):
    """Rank of ``A``; destroys the contents (forward elimination only)."""
    cdef Py_ssize_t rows = A.shape[0]
    cdef Py_ssize_t cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, factor, tmp
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                A[r, j] = (A[r, j] * inv) % p
        for i in range(r + 1, rows):
            factor = A[i, c]
            if factor == 0:
                continue
            factor = p - factor
            for j in range(c, cols):
                if A[r, j] != 0:
                    A[i, j] = (A[i, j] + factor * A[r, j]) % p
        r += 1
    return r
