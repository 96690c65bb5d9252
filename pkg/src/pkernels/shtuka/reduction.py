r"""Iwahori reduction of nonsingular matrices over k[[t]].

The Iwahori subgroup here is upper triangular mod t.  Every nonsingular
A factors as A = i1 · t^lam P_u · i2 with i1, i2 Iwahori; the monomial
middle is computed by valuation-pivot Gaussian elimination using only
I-legal row and column operations:

* row_i += c * row_j is legal iff (i < j and c integral) or (i > j and
  c in tO); columns mirrored.

Picking, among minimal-valuation active entries, the LAST such row and
within it the LEFTMOST such column makes every clearing step legal.

Working mod t^N with N = v(det) + 2 is exact: changing A by E with
v(E) >= N multiplies it by 1 + A^{-1}E whose correction is in t·M_h(O),
hence Iwahori on both sides.
"""

import itertools

import numpy as np

from ..affine import Element
from ..errors import ResourceLimitError
from .gf import FieldConfig
from . import polymat as PM

__all__ = [
    'iwahori_class_of', 'random_iwahori', 'iwahori_orbit_size', 'lattice_key',
]


def _entry_val(a, i, j, n):
    nz = np.nonzero(a[i, j, :n])[0]
    return int(nz[0]) if nz.size else None


def iwahori_class_of(amat, cfg: FieldConfig, shift: int = 0,
                     expected_vdet: int = None) -> Element:
    """Monomial representative of I·A·I as an affine element.

    amat is a polynomial coefficient tensor; shift=s means the actual
    matrix is t^{-s}·amat (so Laurent inputs are supported by premultiplying).
    """
    a = np.asarray(amat, dtype=np.int64)
    h = a.shape[0]
    vdet = expected_vdet
    if vdet is None:
        det = PM.pm_det(a, cfg)
        vdet = PM.poly_valuation(det)
        if vdet is None:
            raise ValueError('singular matrix')
    n = vdet + 2
    a = PM.pm_pad(PM.pm_truncate(a, n), n)
    act_rows = list(range(h))
    act_cols = list(range(h))
    perm = [None] * h
    lam = [None] * h
    for _ in range(h):
        best = None
        for i in act_rows:
            for j in act_cols:
                v = _entry_val(a, i, j, n)
                if v is not None and (best is None or v < best):
                    best = v
        if best is None:
            raise ValueError('insufficient precision: active block vanishes mod t^%d' % n)
        i0 = max(i for i in act_rows
                 if any(_entry_val(a, i, j, n) == best for j in act_cols))
        j0 = min(j for j in act_cols if _entry_val(a, i0, j, n) == best)
        # normalize the pivot to exactly t^best by a unit row scaling
        unit = a[i0, j0, best:n].copy()
        uinv = PM.poly_series_inv(unit, n, cfg)
        for j in act_cols:
            a[i0, j] = _poly_mul_mod(a[i0, j], uinv, n, cfg)
        # clear the pivot column with row operations (legal by pivot choice)
        for i in act_rows:
            if i == i0:
                continue
            c = _poly_div_t(a[i, j0], best, n)
            if c is None:
                continue
            c = cfg.neg[c]
            for j in act_cols:
                a[i, j] = cfg.add[a[i, j], _poly_mul_mod(a[i0, j], c, n, cfg)]
        # clear the pivot row with column operations
        for j in act_cols:
            if j == j0:
                continue
            c = _poly_div_t(a[i0, j], best, n)
            if c is None:
                continue
            c = cfg.neg[c]
            for i in act_rows:
                a[i, j] = cfg.add[a[i, j], _poly_mul_mod(a[i, j0], c, n, cfg)]
        perm[j0] = i0 + 1
        lam[i0] = best
        act_rows.remove(i0)
        act_cols.remove(j0)
    if sum(lam) != vdet:
        raise ValueError('pivot valuations sum to %d, determinant has %d' % (sum(lam), vdet))
    return Element(tuple(v - shift for v in lam), tuple(perm))


def _poly_mul_mod(a, b, n, cfg):
    out = PM.poly_mul(a, b, cfg)[:n]
    if len(out) < n:
        out = np.concatenate([out, np.zeros(n - len(out), dtype=np.int64)])
    return out


def _poly_div_t(c, k, n):
    """c / t^k as a length-n vector, or None if c = 0; requires val >= k."""
    nz = np.nonzero(c)[0]
    if not nz.size:
        return None
    assert nz[0] >= k
    out = np.zeros(n, dtype=np.int64)
    tail = c[k:]
    out[:len(tail)] = tail
    return out


def random_iwahori(h: int, cfg: FieldConfig, deg: int, rng) -> np.ndarray:
    """Random Iwahori element mod t^deg: upper triangular invertible
    constant term, strictly sub-diagonal entries divisible by t."""
    q = cfg.q
    a = rng.integers(0, q, size=(h, h, deg), dtype=np.int64)
    for i in range(h):
        a[i, i, 0] = rng.integers(1, q, dtype=np.int64)
        for j in range(i):
            a[i, j, 0] = 0
    return a


# ------------------------------------------------------ orbit counting

def _hnf_key(cols, n, cfg: FieldConfig):
    """Canonical form of the O-lattice spanned by the given polynomial
    columns, elimination row by row; returns bytes."""
    h = len(cols)
    cols = [np.asarray(c, dtype=np.int64) for c in cols]
    cols = [np.pad(c, ((0, 0), (0, max(0, n - c.shape[1]))))[:, :n] for c in cols]
    fixed = []
    remaining = list(cols)
    for r in range(h):
        vals = []
        for k, c in enumerate(remaining):
            nz = np.nonzero(c[r])[0]
            vals.append(int(nz[0]) if nz.size else None)
        live = [k for k, v in enumerate(vals) if v is not None]
        if not live:
            raise ValueError('rank deficiency at precision %d' % n)
        a = min(vals[k] for k in live)
        kstar = min(k for k in live if vals[k] == a)
        piv = remaining.pop(kstar)
        unit = piv[r, a:]
        uinv = PM.poly_series_inv(unit, n, cfg)
        piv = np.stack([_poly_mul_mod(piv[i], uinv, n, cfg) for i in range(h)])
        for k, c in enumerate(remaining):
            nz = np.nonzero(c[r])[0]
            if not nz.size:
                continue
            q = _poly_div_t(c[r], a, n)
            q = cfg.neg[q]
            remaining[k] = np.stack(
                [cfg.add[c[i], _poly_mul_mod(piv[i], q, n, cfg)] for i in range(h)])
        fixed.append((r, a, piv))
    # reduce each fixed column's lower entries modulo later pivots
    for idx in range(len(fixed)):
        r0, a0, col = fixed[idx]
        for idx2 in range(idx + 1, len(fixed)):
            r2, a2, piv2 = fixed[idx2]
            entry = col[r2]
            keep = entry.copy()
            keep[a2:] = 0
            excess = np.zeros(n, dtype=np.int64)
            excess[:n - a2] = entry[a2:]
            if excess.any():
                q = cfg.neg[excess]
                col = np.stack([cfg.add[col[i], _poly_mul_mod(piv2[i], q, n, cfg)]
                                for i in range(h)])
        fixed[idx] = (r0, a0, col)
    return b''.join(f[2].tobytes() for f in fixed)


def lattice_key(m, cfg: FieldConfig, n: int) -> tuple:
    """Key of the coset m·I: canonical forms of the lattices m·Lambda_j,
    Lambda_j = span(e_1, ..., e_{h-j}, t·e_{h-j+1}, ..., t·e_h)."""
    h = m.shape[0]
    keys = []
    for j in range(h):
        cols = []
        for c in range(h):
            col = m[:, c].copy()
            if c >= h - j:
                col = np.pad(col, ((0, 0), (1, 0)))[:, :col.shape[1] + 1]
            cols.append(col)
        keys.append(_hnf_key(cols, n, cfg))
    return tuple(keys)


def _iwahori_generators(h: int, cfg: FieldConfig, a_max: int):
    """Topological generators of I to depth a_max: elementary matrices
    1 + c·t^a·E_ij over an additive basis c, plus diagonal units."""
    gens = []
    basis = cfg.basis()
    for i in range(h):
        for j in range(h):
            lo = 0 if i < j else 1
            if i == j:
                continue
            for a in range(lo, a_max + 1):
                for c in basis:
                    g = PM.pm_eye(h, a + 1)
                    g[i, j, a] = c
                    gens.append(g)
    prim = cfg.primitive()
    for i in range(h):
        if prim:
            g = PM.pm_eye(h, 1)
            g[i, i, 0] = prim
            gens.append(g)
        for a in range(1, a_max + 1):
            for c in basis:
                g = PM.pm_eye(h, a + 1)
                g[i, i, a] = cfg.add[g[i, i, a], c]
                gens.append(g)
    return gens


def iwahori_orbit_size(x: Element, cfg: FieldConfig, a_max: int = None,
                       limit: int = 1 << 22) -> int:
    """[I : I ∩ x I x^{-1}], counted as the orbit of xI in G/I under
    left multiplication by I."""
    h = x.h
    xm, s = PM.pm_from_element(x)
    mx = max(max(x.lam), -min(x.lam), 1)
    if a_max is None:
        a_max = 2 * mx + 3
    n = h * (s + mx + 1) + a_max + 3
    gens = _iwahori_generators(h, cfg, a_max)
    start = PM.pm_pad(xm, n)
    key0 = lattice_key(start, cfg, n)
    seen = {key0}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                m2 = PM.pm_truncate(PM.pm_mul(g, m, cfg), n)
                k = lattice_key(m2, cfg, n)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > limit:
                        raise ResourceLimitError('orbit exceeds %d cosets' % limit)
                    nxt.append(m2)
        frontier = nxt
    return len(seen)
