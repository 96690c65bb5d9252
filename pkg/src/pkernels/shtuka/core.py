r"""Matrix models over k[[t]]: a local datum is a nonsingular polynomial
matrix A acting sigma-semilinearly; its residue mod t carries the F of a
residue module, with V recovered from t·A^{-1}.

The Newton polygon is computed exactly from the characteristic
polynomial of the r-fold twisted product A·sigma(A)···sigma^{r-1}(A)
(lower convex hull of coefficient valuations, slopes divided by r).
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..affine import Element, in_minuscule_double_coset
from ..errors import ConventionError
from ..polygons import NewtonPolygon, polygon_from_slopes, x_of_polygon
from .bt1 import Bt1Module
from .gf import FieldConfig
from . import polymat as PM

__all__ = [
    'LocalShtuka', 'shtuka_from_element', 'minimal_shtuka', 'sample_shtuka',
    'random_unimodular', 'bt1_of', 'newton_polygon_of',
    'sigma_conjugate_sample',
]


@dataclass(frozen=True)
class LocalShtuka:
    """Polynomial matrix amat with v_t(det) = dimension; witness, when
    present, is a pair (U1, U2) of unimodular tensors with
    amat = U1 · diag(t^mu) · U2 for the minuscule mu."""

    cfg: FieldConfig
    amat: np.ndarray
    witness: tuple = None

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.amat, dtype=np.int64))
        object.__setattr__(self, 'amat', a)
        a.setflags(write=False)

    @property
    def h(self) -> int:
        return self.amat.shape[0]

    @property
    def dimension(self) -> int:
        v = PM.poly_valuation(PM.pm_det(self.amat, self.cfg))
        if v is None:
            raise ValueError('singular matrix')
        return v


def shtuka_from_element(x: Element, cfg: FieldConfig) -> LocalShtuka:
    """Monomial datum of a minuscule affine element, with the standard
    permutation witness A = P_v · diag(t^mu) · (P_v^{-1} P_u)."""
    h = x.h
    d = x.v_det()
    if not in_minuscule_double_coset(x, h, d):
        raise ValueError('element is not minuscule')
    from .. import weyl
    ones = [i for i in range(1, h + 1) if x.lam[i - 1] == 1]
    zeros = [i for i in range(1, h + 1) if x.lam[i - 1] == 0]
    v = tuple(ones + zeros)
    u1 = np.zeros((h, h), dtype=np.int64)
    for j in range(1, h + 1):
        u1[v[j - 1] - 1, j - 1] = 1
    w = weyl.compose(weyl.inverse(v), x.perm)
    u2 = np.zeros((h, h), dtype=np.int64)
    for j in range(1, h + 1):
        u2[w[j - 1] - 1, j - 1] = 1
    amat, s = PM.pm_from_element(x)
    assert s == 0
    return LocalShtuka(cfg, amat, witness=(PM.pm_from_const(u1), PM.pm_from_const(u2)))


def minimal_shtuka(P: NewtonPolygon, cfg: FieldConfig) -> LocalShtuka:
    return shtuka_from_element(x_of_polygon(P), cfg)


def random_unimodular(h: int, cfg: FieldConfig, deg: int, rng) -> np.ndarray:
    """Random element of GL_h(O) mod t^deg: invertible constant term,
    uniform higher coefficients."""
    q = cfg.q
    while True:
        c0 = rng.integers(0, q, size=(h, h), dtype=np.int64)
        try:
            PM.gf_mat_inv(c0, cfg)
            break
        except ValueError:
            continue
    a = np.zeros((h, h, max(deg, 1)), dtype=np.int64)
    a[:, :, 0] = c0
    if deg > 1:
        a[:, :, 1:] = rng.integers(0, q, size=(h, h, deg - 1), dtype=np.int64)
    return a


def sample_shtuka(hd, cfg: FieldConfig, deg: int = 2, seed=None, rng=None) -> LocalShtuka:
    """U1 · diag(t^mu) · U2 with random unimodular factors of the given
    coefficient degree."""
    if rng is None:
        rng = np.random.default_rng(seed)
    h, d = hd.height, hd.dimension
    u1 = random_unimodular(h, cfg, deg, rng)
    u2 = random_unimodular(h, cfg, deg, rng)
    mid = PM.pm_zeros(h, h, 2)
    for i in range(h):
        mid[i, i, 1 if i < d else 0] = 1
    amat = PM.pm_trim(PM.pm_mul(PM.pm_mul(u1, mid, cfg), u2, cfg))
    return LocalShtuka(cfg, amat, witness=(u1, u2))


def bt1_of(sh: LocalShtuka) -> Bt1Module:
    """Residue module: F is A mod t; V is (t·A^{-1}) mod t.

    With a witness the V-matrix is assembled from the factors; without
    one it is read off the adjugate exactly: for det A = t^d·(unit u),
    t·A^{-1} = adj(A)·u^{-1}·t^{1-d}, whose residue is coefficient d-1
    of adj(A)·(u^{-1} mod t^d); lower coefficients must vanish.
    """
    cfg = sh.cfg
    h = sh.h
    fbar = PM.pm_coeff(sh.amat, 0)
    det = PM.pm_det(sh.amat, cfg)
    d = PM.poly_valuation(det)
    if d is None:
        raise ValueError('singular matrix')
    if sh.witness is not None:
        u1, u2 = sh.witness
        u1i0 = PM.gf_mat_inv(PM.pm_coeff(u1, 0), cfg)
        u2i0 = PM.gf_mat_inv(PM.pm_coeff(u2, 0), cfg)
        # t·A^{-1} = U2^{-1}·diag(t^{1-mu})·U1^{-1}; mod t the diagonal is mu itself
        mid = np.zeros((h, h), dtype=np.int64)
        for i in range(d):
            mid[i, i] = 1
        vbar = PM.gf_mat_mul(PM.gf_mat_mul(u2i0, mid, cfg), u1i0, cfg)
    elif d == 0:
        vbar = np.zeros((h, h), dtype=np.int64)
    else:
        adj = PM.pm_adjugate(sh.amat, cfg)
        unit = det[d:]
        uinv = PM.poly_series_inv(unit, d, cfg)
        w = PM.pm_truncate(PM.pm_poly_scale(adj, uinv, cfg), d)
        for k in range(d - 1):
            if PM.pm_coeff(w, k).any():
                raise ConventionError('adjugate residue has a low-order term; '
                                      'datum is not minuscule')
        vbar = PM.pm_coeff(w, d - 1)
    # both routes compute t*A^{-1} mod t; the stored matrix is for the
    # sigma^{-1}-semilinear operator, so A*frb(vmat) = tI forces one twist
    vbar = cfg.frbi[vbar]
    Z = Bt1Module(cfg, fbar, vbar).check()
    assert Z.dimension == d
    return Z


def _lower_hull_slopes(points):
    """points: list of (i, v) with i ascending; returns per-unit slopes of
    the lower convex hull across the full i range."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y1 - y2, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return slopes


def newton_polygon_of(sh: LocalShtuka) -> NewtonPolygon:
    """Exact Newton polygon of the sigma-semilinear action of amat."""
    cfg = sh.cfg
    b = sh.amat
    for k in range(1, cfg.r):
        b = PM.pm_mul(b, PM.pm_frob(sh.amat, cfg, k), cfg)
    cp = PM.pm_char_poly(b, cfg)
    h = sh.h
    pts = []
    for i in range(h + 1):
        v = PM.poly_valuation(cp[i])
        if v is not None:
            pts.append((i, v))
    if pts[0][0] != 0 or pts[-1][0] != h:
        raise ValueError('singular matrix')
    slopes = [s / cfg.r for s in _lower_hull_slopes(pts)]
    slopes.reverse()
    P = polygon_from_slopes(slopes)
    assert P.height == h and P.dimension == sh.dimension
    return P


def sigma_conjugate_sample(x: Element, cfg: FieldConfig, trials: int, seed=0,
                           deg: int = 2) -> Counter:
    """Multiset of Iwahori classes of g·X·sigma(g)^{-1} over random
    g in GL_h(O), X the monomial matrix of x."""
    from .reduction import iwahori_class_of
    h = x.h
    xm, s = PM.pm_from_element(x)
    vdet = x.v_det() + h * s
    out = Counter()
    for tr in range(trials):
        rng = np.random.default_rng([seed, tr])
        for attempt in range(3):
            n = vdet + 2 + deg + 2 * attempt
            g = random_unimodular(h, cfg, deg, rng)
            gs = PM.pm_frob(g, cfg, 1)
            gsi = PM.pm_inv_mod(gs, n, cfg)
            m = PM.pm_truncate(PM.pm_mul(PM.pm_mul(g, xm, cfg), gsi, cfg), n + s)
            try:
                cls = iwahori_class_of(m, cfg, shift=s, expected_vdet=vdet)
                out[cls] += 1
                break
            except ValueError:
                continue
        else:
            raise ConventionError('reduction failed at all precisions for %r' % (x,))
    return out
