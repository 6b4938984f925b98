# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef int64_t _small_binom(int64_t n, int64_t k, int64_t p):
    # n < p here; exact binomial of digits, reduced mod p
    cdef int64_t num = 1, den = 1, i
    if k < 0 or k > n:
        return 0
    for i in range(k):
        num = (num * ((n - i) % p)) % p
        den = (den * ((i + 1) % p)) % p
    return (num * _powmod(den, p - 2, p)) % p


cdef int64_t _powmod(int64_t x, int64_t e, int64_t p):
    cdef int64_t r = 1
    x %= p
    while e > 0:
        if e & 1:
            r = (r * x) % p
        x = (x * x) % p
        e >>= 1
    return r


def binom_mod(b, a, p):
    if a < 0:
        return 0
    if a == 0:
        return 1
    # fall back to Python integers outside the 63-bit range
    if not (-(1 << 40) < b < (1 << 40) and a < (1 << 40) and p < (1 << 30)):
        from modvertex._pykernels import binom_mod as slow
        return slow(b, a, p)
    return _binom_mod_c(b, a, p)


cdef int64_t _binom_mod_c(int64_t b, int64_t a, int64_t p):
    cdef int64_t sign = 1, r = 1, a0, b0
    if b < 0:
        b = a - b - 1
        if a & 1:
            sign = -1
    if a > b:
        return 0
    while a:
        a0 = a % p
        b0 = b % p
        if a0 > b0:
            return 0
        r = (r * _small_binom(b0, a0, p)) % p
        a //= p
        b //= p
    r = (sign * r) % p
    if r < 0:
        r += p
    return r


def rref_mod(rows, ncols, p):
    cdef int64_t P = p
    cdef Py_ssize_t nrows = len(rows), nc = ncols
    cdef cnp.ndarray[int64_t, ndim=2] m = np.zeros((max(nrows, 1), max(nc, 1)), dtype=np.int64)
    cdef Py_ssize_t i, k, c, r = 0, piv
    cdef int64_t inv, f
    for i in range(nrows):
        for k in range(nc):
            m[i, k] = rows[i][k] % P
    pivots = []
    for c in range(nc):
        if r >= nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(nc):
                f = m[r, k]
                m[r, k] = m[piv, k]
                m[piv, k] = f
        inv = _powmod(m[r, c], P - 2, P)
        for k in range(c, nc):
            m[r, k] = (m[r, k] * inv) % P
        for i in range(nrows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for k in range(c, nc):
                    if m[r, k] != 0:
                        m[i, k] = (m[i, k] - f * m[r, k]) % P
                        if m[i, k] < 0:
                            m[i, k] += P
        pivots.append(c)
        r += 1
    red = [[int(m[i, k]) for k in range(nc)] for i in range(r)]
    return red, pivots


def nullspace_mod(rows, ncols, p):
    red, pivots = rref_mod(rows, ncols, p)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i][free]) % p
        basis.append(v)
    return basis


def rank_mod(rows, ncols, p):
    return len(rref_mod(rows, ncols, p)[1])


def series_mul2d(a, b, Py_ssize_t max_delta):
    cdef cnp.ndarray[int64_t, ndim=2] A = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=2] B = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t nd = max_delta + 1, w = A.shape[1], off = (w - 1) // 2
    cdef cnp.ndarray[int64_t, ndim=2] out = np.zeros((nd, w), dtype=np.int64)
    cdef Py_ssize_t d1, d2, j1, j2, j
    cdef int64_t x
    for d1 in range(min(nd, A.shape[0])):
        for j1 in range(w):
            x = A[d1, j1]
            if x == 0:
                continue
            for d2 in range(min(nd - d1, B.shape[0])):
                for j2 in range(w):
                    if B[d2, j2] == 0:
                        continue
                    j = j1 + j2 - off
                    if 0 <= j < w:
                        out[d1 + d2, j] += x * B[d2, j2]
    return out
