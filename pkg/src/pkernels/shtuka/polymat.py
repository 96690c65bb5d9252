r"""Matrices over k[t] as (rows, cols, deg+1) int64 coefficient tensors.

All entries are polynomials in t with coefficients in a FieldConfig
field; Laurent matrices are handled by callers via an explicit power of
t shift.  Exact arithmetic throughout: products grow degree, truncation
is explicit.
"""

import numpy as np

from .. import _kernels as K
from .gf import FieldConfig

__all__ = [
    'pm_zeros', 'pm_eye', 'pm_from_const', 'pm_trim', 'pm_truncate',
    'pm_pad', 'pm_shift', 'pm_add', 'pm_neg', 'pm_scale', 'pm_mul',
    'pm_frob', 'pm_coeff', 'pm_equal', 'pm_is_zero', 'poly_valuation',
    'poly_mul', 'poly_series_inv', 'pm_det', 'pm_adjugate',
    'pm_char_poly', 'gf_mat_mul', 'gf_mat_inv', 'pm_inv_mod',
    'pm_from_element', 'pm_val_min',
]


def pm_zeros(h, w, deg1=1):
    return np.zeros((h, w, deg1), dtype=np.int64)


def pm_eye(h, deg1=1):
    a = pm_zeros(h, h, deg1)
    a[np.arange(h), np.arange(h), 0] = 1
    return a


def pm_from_const(mat):
    mat = np.asarray(mat, dtype=np.int64)
    return mat[:, :, None].copy()


def pm_trim(a):
    """Drop trailing all-zero coefficient slices (always keeps one)."""
    d = a.shape[2]
    while d > 1 and not a[:, :, d - 1].any():
        d -= 1
    return np.ascontiguousarray(a[:, :, :d])


def pm_truncate(a, n):
    """Reduce mod t^n."""
    if n < 1:
        raise ValueError('truncation order must be >= 1')
    return np.ascontiguousarray(a[:, :, :n]) if a.shape[2] > n else a.copy()


def pm_pad(a, deg1):
    if a.shape[2] >= deg1:
        return a.copy()
    out = np.zeros(a.shape[:2] + (deg1,), dtype=np.int64)
    out[:, :, :a.shape[2]] = a
    return out


def pm_shift(a, s):
    """Multiply by t^s (s >= 0)."""
    if s < 0:
        raise ValueError('negative shift')
    if s == 0:
        return a.copy()
    out = np.zeros(a.shape[:2] + (a.shape[2] + s,), dtype=np.int64)
    out[:, :, s:] = a
    return out


def pm_add(a, b, cfg: FieldConfig):
    d = max(a.shape[2], b.shape[2])
    return cfg.add[pm_pad(a, d), pm_pad(b, d)]


def pm_neg(a, cfg: FieldConfig):
    return cfg.neg[a]


def pm_scale(c, a, cfg: FieldConfig):
    return cfg.mul[c, a]


def pm_mul(a, b, cfg: FieldConfig):
    """Exact polynomial matrix product."""
    return K.polymat_mul(a, b, cfg.add, cfg.mul)


def pm_poly_scale(a, poly, cfg: FieldConfig):
    """Multiply every entry of a by the scalar polynomial poly (1D coeffs)."""
    n, m, da = a.shape
    db = len(poly)
    out = np.zeros((n, m, da + db - 1), dtype=np.int64)
    for s in range(db):
        c = int(poly[s])
        if c:
            out[:, :, s:s + da] = cfg.add[out[:, :, s:s + da], cfg.mul[c, a]]
    return out


def pm_frob(a, cfg: FieldConfig, k: int = 1):
    """Apply the p-power Frobenius k times entrywise (k may be negative)."""
    out = a
    if k >= 0:
        for _ in range(k % cfg.r if cfg.r > 0 else k):
            out = cfg.frb[out]
    else:
        for _ in range((-k) % cfg.r):
            out = cfg.frbi[out]
    return out.copy() if out is a else out


def pm_coeff(a, i):
    if i < 0 or i >= a.shape[2]:
        return np.zeros(a.shape[:2], dtype=np.int64)
    return a[:, :, i].copy()


def pm_equal(a, b):
    d = max(a.shape[2], b.shape[2])
    return np.array_equal(pm_pad(a, d), pm_pad(b, d))


def pm_is_zero(a):
    return not a.any()


def pm_val_min(a):
    """Minimum t-adic valuation over all entries (None if zero matrix)."""
    nz = np.nonzero(a.any(axis=(0, 1)))[0]
    return int(nz[0]) if nz.size else None


def poly_valuation(c):
    """Valuation of a 1D coefficient vector (None for zero)."""
    nz = np.nonzero(np.asarray(c))[0]
    return int(nz[0]) if nz.size else None


def poly_mul(a, b, cfg: FieldConfig):
    a = np.asarray(a, dtype=np.int64).reshape(1, -1)
    b = np.asarray(b, dtype=np.int64).reshape(1, -1)
    return K.gf_conv2(a, b, cfg.add, cfg.mul)[0]


def poly_series_inv(u, n, cfg: FieldConfig):
    """Inverse of a unit power series mod t^n."""
    u = np.asarray(u, dtype=np.int64)
    if u[0] == 0:
        raise ValueError('not a unit')
    out = np.zeros(n, dtype=np.int64)
    out[0] = cfg.inv[u[0]]
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(u) - 1) + 1):
            acc = int(cfg.add[acc, cfg.mul[u[j], out[k - j]]])
        out[k] = cfg.mul[cfg.neg[acc], cfg.inv[u[0]]]
    return out


def gf_mat_mul(a, b, cfg: FieldConfig):
    return K.gf_matmul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64),
                       cfg.add, cfg.mul)


def gf_mat_inv(mat, cfg: FieldConfig):
    """Inverse of a constant matrix (raises on singular input)."""
    mat = np.asarray(mat, dtype=np.int64)
    h = mat.shape[0]
    aug = np.zeros((h, 2 * h), dtype=np.int64)
    aug[:, :h] = mat
    aug[np.arange(h), h + np.arange(h)] = 1
    red, rank = K.gf_rref(aug, cfg.add, cfg.mul, cfg.neg, cfg.inv)
    if rank < h or not np.array_equal(red[:, :h], np.eye(h, dtype=np.int64)):
        raise ValueError('singular matrix')
    return np.ascontiguousarray(red[:, h:])


def pm_inv_mod(a, n, cfg: FieldConfig):
    """Inverse of a matrix with unit constant term, mod t^n (Newton)."""
    x = pm_from_const(gf_mat_inv(pm_coeff(a, 0), cfg))
    prec = 1
    aa = pm_truncate(a, n)
    while prec < n:
        prec = min(2 * prec, n)
        ax = pm_truncate(pm_mul(pm_truncate(aa, prec), x, cfg), prec)
        xax = pm_truncate(pm_mul(x, ax, cfg), prec)
        x = pm_add(pm_add(x, x, cfg), pm_neg(xax, cfg), cfg)
        x = pm_truncate(x, prec)
    return pm_pad(x, n)


def pm_from_element(x):
    """Monomial matrix of an affine element, as (tensor, shift) with the
    tensor holding t^shift times the matrix (so it is polynomial)."""
    h = x.h
    s = max(0, -min(x.lam))
    deg1 = max(x.lam) + s + 1
    a = pm_zeros(h, h, deg1)
    for j in range(1, h + 1):
        i = x.perm[j - 1]
        a[i - 1, j - 1, x.lam[i - 1] + s] = 1
    return a, s


# ---------------------------------------------------------------- dets

def _subset_dp(entries, h, combine, zero, one):
    """det via column-by-column Laplace DP over row subsets.

    entries(i, c) returns the (i, c) entry in the value algebra; combine
    handles (add, mul, neg) through closures.  Sign of inserting row i
    into chosen set S is (-1)^{#{i' in S: i' > i}}.
    """
    add, mul, neg = combine
    dp = {0: one}
    for c in range(h):
        ndp = {}
        for S, val in dp.items():
            for i in range(h):
                bit = 1 << i
                if S & bit:
                    continue
                e = entries(i, c)
                if e is None:
                    continue
                term = mul(val, e)
                if bin(S >> (i + 1)).count('1') % 2:
                    term = neg(term)
                key = S | bit
                ndp[key] = add(ndp[key], term) if key in ndp else term
        dp = ndp
        if not dp:
            return zero
    return dp.get((1 << h) - 1, zero)


def pm_det(a, cfg: FieldConfig):
    """Determinant as a 1D coefficient vector."""
    h = a.shape[0]
    if h == 0:
        return np.array([1], dtype=np.int64)

    def entries(i, c):
        e = a[i, c]
        return e if e.any() else None

    def add(x, y):
        d = max(len(x), len(y))
        xp = np.zeros(d, dtype=np.int64)
        xp[:len(x)] = x
        yp = np.zeros(d, dtype=np.int64)
        yp[:len(y)] = y
        return cfg.add[xp, yp]

    def mul(x, y):
        return poly_mul(x, y, cfg)

    def neg(x):
        return cfg.neg[np.asarray(x)]

    one = np.array([1], dtype=np.int64)
    zero = np.array([0], dtype=np.int64)
    out = _subset_dp(entries, h, (add, mul, neg), zero, one)
    nz = np.nonzero(out)[0]
    return out[:nz[-1] + 1] if nz.size else np.array([0], dtype=np.int64)


def pm_adjugate(a, cfg: FieldConfig):
    """Adjugate matrix: adj[i, j] = (-1)^(i+j) * minor(j, i)."""
    h = a.shape[0]
    deg = (a.shape[2] - 1) * max(h - 1, 0) + 1
    out = pm_zeros(h, h, deg)
    rows = list(range(h))
    cols = list(range(h))
    for i in range(h):
        for j in range(h):
            sub = a[np.ix_([r for r in rows if r != j], [c for c in cols if c != i])]
            minor = pm_det(sub, cfg) if h > 1 else np.array([1], dtype=np.int64)
            if (i + j) % 2:
                minor = cfg.neg[minor]
            out[i, j, :len(minor)] = minor
    return pm_trim(out)


def pm_char_poly(a, cfg: FieldConfig):
    """Coefficients of det(X*I - a) as a 2D array cp[x_deg, t_deg]."""
    h = a.shape[0]
    dt = a.shape[2]

    def entries(i, c):
        e = np.zeros((2, dt), dtype=np.int64)
        e[0, :] = cfg.neg[a[i, c]]
        if i == c:
            e[1, 0] = cfg.add[e[1, 0], 1]
        if not e.any():
            return None
        return e

    def add(x, y):
        s0 = max(x.shape[0], y.shape[0])
        s1 = max(x.shape[1], y.shape[1])
        xp = np.zeros((s0, s1), dtype=np.int64)
        xp[:x.shape[0], :x.shape[1]] = x
        yp = np.zeros((s0, s1), dtype=np.int64)
        yp[:y.shape[0], :y.shape[1]] = y
        return cfg.add[xp, yp]

    def mul(x, y):
        return K.gf_conv2(x, y, cfg.add, cfg.mul)

    def neg(x):
        return cfg.neg[x]

    one = np.array([[1]], dtype=np.int64)
    zero = np.array([[0]], dtype=np.int64)
    out = _subset_dp(entries, h, (add, mul, neg), zero, one)
    full = np.zeros((h + 1, max(out.shape[1], 1)), dtype=np.int64)
    full[:out.shape[0], :out.shape[1]] = out
    return full
