"""Exact linear algebra over F_p (numpy int arrays) and F_q (encodings).

F_q matrices are int arrays of element encodings.  Linear maps over F_q
are applied through the regular representation: each element becomes an
h x h block over F_p, so a single integer matmul mod p does the work and
the h = 1 case degenerates to plain mod-p arithmetic.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# mod-p elimination


def row_echelon(mat, p):
    """Forward elimination mod p.  Returns (echelon rows, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        rows_below = np.nonzero(m[r + 1:, c])[0]
        if rows_below.size:
            idx = rows_below + r + 1
            m[idx] = (m[idx] - np.outer(m[idx, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(mat, p):
    return len(row_echelon(mat, p)[1])


def reduce_rows(echelon, pivots, vecs, p):
    """Residual of each row of vecs after reduction against echelon rows."""
    v = np.array(vecs, dtype=np.int64) % p
    single = v.ndim == 1
    if single:
        v = v[None, :]
    for i, c in enumerate(pivots):
        f = v[:, c]
        if np.any(f):
            v = (v - np.outer(f, echelon[i])) % p
    return v[0] if single else v


def in_rowspace(echelon, pivots, vecs, p):
    res = reduce_rows(echelon, pivots, vecs, p)
    if res.ndim == 1:
        return not res.any()
    return ~res.any(axis=1)


def nullspace(mat, p):
    """Basis (rows) of the right null space of mat over F_p."""
    ech, pivots = row_echelon(mat, p)
    ncols = mat.shape[1]
    # back-substitute to reduced echelon form
    red = ech.copy()
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        above = np.nonzero(red[:i, c])[0]
        if above.size:
            red[above] = (red[above] - np.outer(red[above, c], red[i])) % p
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-red[i, fc]) % p
    return basis


# ---------------------------------------------------------------------------
# F_q maps via the regular representation


def block_matrix(ctx, w):
    """Expand an F_q matrix of encodings into its (m*h) x (n*h) F_p block form."""
    w = np.asarray(w)
    rep = ctx.regrep()
    m, n = w.shape
    h = ctx.h
    out = rep[w]                       # (m, n, h, h)
    out = out.transpose(0, 2, 1, 3)    # (m, h, n, h)
    return np.ascontiguousarray(out.reshape(m * h, n * h))


def to_coeff_tensor(ctx, enc_arr):
    """Encoding array -> digit tensor with a trailing axis of length h."""
    a = np.asarray(enc_arr, dtype=np.int64)
    p, h = ctx.p, ctx.h
    out = np.empty(a.shape + (h,), dtype=np.int64)
    for i in range(h):
        out[..., i] = a % p
        a = a // p
    return out


def from_coeff_tensor(ctx, coeffs):
    a = np.asarray(coeffs, dtype=np.int64) % ctx.p
    enc = np.zeros(a.shape[:-1], dtype=np.int64)
    mult = 1
    for i in range(ctx.h):
        enc = enc + a[..., i] * mult
        mult *= ctx.p
    return enc

def apply_fq_map(ctx, bw, coeffs, axis):
    """Apply the F_q-linear map bw (block form) along one axis of a digit tensor.

    coeffs has a trailing coefficient axis of length h; axis indexes one of
    the leading dimensions.
    """
    h = ctx.h
    a = np.moveaxis(coeffs, axis, 0)          # (n, ..., h)
    n = a.shape[0]
    rest = a.shape[1:-1]
    a = np.moveaxis(a, -1, 1).reshape(n * h, -1)
    out = (bw @ a) % ctx.p                    # (m*h, prod rest)
    m = bw.shape[0] // h
    out = out.reshape(m, h, *rest)
    out = np.moveaxis(out, 1, -1)
    return np.moveaxis(out, 0, axis)


def fq_matvec(ctx, w, v):
    """w (m x n encodings) @ v (n encodings) over F_q -> m encodings."""
    bw = block_matrix(ctx, w)
    cv = to_coeff_tensor(ctx, v)          # (n, h)
    flat = cv.reshape(-1)                 # interleaved (n*h,)
    out = (bw @ flat) % ctx.p
    return from_coeff_tensor(ctx, out.reshape(-1, ctx.h))
