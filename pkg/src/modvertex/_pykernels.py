"""Pure-Python kernels: Lucas binomials, row reduction mod p, 2D series products.

These mirror ``_core.pyx`` one-to-one and are used whenever the compiled
extension is unavailable (or ``MODVERTEX_PURE=1`` is set).
"""
from math import comb

import numpy as np


def binom_mod(b, a, p):
    if a < 0:
        return 0
    if a == 0:
        return 1
    sign = 1
    if b < 0:
        # binom(-m, a) = (-1)^a binom(m + a - 1, a)
        b = a - b - 1
        if a & 1:
            sign = -1
    if a > b:
        return 0
    r = 1
    while a:
        a0 = a % p
        b0 = b % p
        if a0 > b0:
            return 0
        r = (r * comb(b0, a0)) % p
        a //= p
        b //= p
    return (sign * r) % p


def rref_mod(rows, ncols, p):
    """Reduced row echelon form of an integer matrix over F_p.

    Returns ``(reduced_rows, pivot_columns)``; input rows are not modified.
    """
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        row = m[r]
        for k in range(c, ncols):
            row[k] = (row[k] * inv) % p
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                other = m[i]
                for k in range(c, ncols):
                    if row[k]:
                        other[k] = (other[k] - f * row[k]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod(rows, ncols, p):
    """Basis of {v : A v = 0} over F_p, each vector a list of length ncols."""
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


def series_mul2d(a, b, max_delta):
    """Truncated product of two dense (delta, alpha) coefficient grids.

    Both grids share the column offset: column ``j`` stands for alpha
    coefficient ``j - off`` with ``off = (ncols - 1) // 2``. Terms leaving the
    grid are dropped.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    nd = max_delta + 1
    w = a.shape[1]
    off = (w - 1) // 2
    out = np.zeros((nd, w), dtype=np.int64)
    for d1 in range(min(nd, a.shape[0])):
        for j1 in np.nonzero(a[d1])[0]:
            x = a[d1, j1]
            for d2 in range(min(nd - d1, b.shape[0])):
                row = b[d2]
                lo = max(0, off - j1)
                hi = min(w, w + off - j1)
                if lo >= hi:
                    continue
                out[d1 + d2, lo + j1 - off:hi + j1 - off] += x * row[lo:hi]
    return out
