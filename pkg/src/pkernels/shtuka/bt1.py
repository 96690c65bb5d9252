r"""Residue modules: a finite-dimensional vector space with a semilinear
operator F (twisted by Frobenius) and an anti-semilinear operator V,
satisfying im F = ker V and im V = ker F.

Vectors are columns; subspaces are stored as canonical reduced
row-basis matrices (rref), so equality of subspaces is array equality.
The canonical filtration is the closure of {0, whole space} under
U -> F(U) and U -> V^{-1}(U); its dimension signature classifies the
module up to isomorphism within a minuscule stratum, with deeper
operator words as a tiebreak.
"""

from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .. import _kernels as K
from ..errors import ConventionError
from .gf import FieldConfig
from .polymat import gf_mat_mul

__all__ = [
    'Bt1Module', 'space_rows', 'space_dim', 'nullspace_rows', 'image_rows',
    'sum_rows', 'intersect_dim', 'f_image', 'v_image', 'f_preimage',
    'v_preimage', 'canonical_filtration', 'eo_signature', 'eo_classify',
    'graded_bt1_from_beginning',
]


@dataclass(frozen=True)
class Bt1Module:
    """h-dimensional module with F(x) = fmat·sigma(x), V(x) = vmat·sigma^{-1}(x)."""

    cfg: FieldConfig
    fmat: np.ndarray
    vmat: np.ndarray
    degrees: tuple = None

    def __post_init__(self):
        f = np.ascontiguousarray(np.asarray(self.fmat, dtype=np.int64))
        v = np.ascontiguousarray(np.asarray(self.vmat, dtype=np.int64))
        if f.shape != v.shape or f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError('fmat and vmat must be square of equal size')
        object.__setattr__(self, 'fmat', f)
        object.__setattr__(self, 'vmat', v)
        f.setflags(write=False)
        v.setflags(write=False)

    @property
    def h(self) -> int:
        return self.fmat.shape[0]

    @property
    def dimension(self) -> int:
        """Codimension of im F, i.e. the d of the stratum."""
        full = space_rows(image_rows(self.fmat, self.cfg), self.cfg)
        return self.h - space_dim(full)

    def check(self):
        """Assert im F = ker V and im V = ker F; returns self."""
        cfg = self.cfg
        imf = f_image(self, full_rows(self.h))
        kerv = _rows_apply(cfg.frb, nullspace_rows(self.vmat, cfg), cfg)
        imv = v_image(self, full_rows(self.h))
        kerf = _rows_apply(cfg.frbi, nullspace_rows(self.fmat, cfg), cfg)
        if not np.array_equal(imf, space_rows(kerv, cfg)):
            raise ValueError('im F != ker V')
        if not np.array_equal(imv, space_rows(kerf, cfg)):
            raise ValueError('im V != ker F')
        return self

    def __hash__(self):
        return hash((self.cfg, self.fmat.tobytes(), self.vmat.tobytes()))

    def __eq__(self, other):
        return (isinstance(other, Bt1Module) and self.cfg == other.cfg
                and np.array_equal(self.fmat, other.fmat)
                and np.array_equal(self.vmat, other.vmat))


# ------------------------------------------------- subspace primitives

def space_rows(rows, cfg: FieldConfig):
    """Canonical rref basis (drops zero rows)."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return rows.reshape(0, rows.shape[1] if rows.ndim == 2 else 0)
    red, rank = K.gf_rref(np.ascontiguousarray(rows), cfg.add, cfg.mul, cfg.neg, cfg.inv)
    return np.ascontiguousarray(red[:rank])


def space_dim(rows) -> int:
    return rows.shape[0]


def full_rows(h):
    return np.eye(h, dtype=np.int64)


def zero_rows(h):
    return np.zeros((0, h), dtype=np.int64)


def nullspace_rows(mat, cfg: FieldConfig):
    """Row basis of {x : mat @ x = 0}."""
    mat = np.asarray(mat, dtype=np.int64)
    m, n = mat.shape
    if m == 0:
        return full_rows(n)
    red, rank = K.gf_rref(np.ascontiguousarray(mat), cfg.add, cfg.mul, cfg.neg, cfg.inv)
    red = red[:rank]
    pivots = []
    col = 0
    for r in range(rank):
        while red[r, col] == 0:
            col += 1
        pivots.append(col)
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        out[k, c] = 1
        for r, pc in enumerate(pivots):
            out[k, pc] = cfg.neg[red[r, c]]
    return space_rows(out, cfg)


def image_rows(mat, cfg: FieldConfig):
    """Column space of mat, as rows."""
    return space_rows(np.asarray(mat, dtype=np.int64).T, cfg)


def sum_rows(a, b, cfg: FieldConfig):
    return space_rows(np.vstack([a, b]), cfg)


def intersect_dim(a, b, cfg: FieldConfig) -> int:
    return space_dim(a) + space_dim(b) - space_dim(sum_rows(a, b, cfg))


def _rows_apply(table, rows, cfg):
    return table[rows] if rows.size else rows


def _preimage_linear(mat, u_rows, cfg: FieldConfig):
    """{x : mat @ x in span(u_rows)} as canonical rows."""
    ann = nullspace_rows(u_rows, cfg) if u_rows.shape[0] else full_rows(mat.shape[0])
    if ann.shape[0] == 0:
        return full_rows(mat.shape[1])
    return nullspace_rows(gf_mat_mul(ann, mat, cfg), cfg)


# ------------------------------------------------- semilinear operators

def f_image(Z: Bt1Module, u_rows):
    """F(U) for U given as rows: span of fmat·sigma(u)."""
    cfg = Z.cfg
    if u_rows.shape[0] == 0:
        return zero_rows(Z.h)
    return space_rows(gf_mat_mul(_rows_apply(cfg.frb, u_rows, cfg), Z.fmat.T, cfg), cfg)


def v_image(Z: Bt1Module, u_rows):
    cfg = Z.cfg
    if u_rows.shape[0] == 0:
        return zero_rows(Z.h)
    return space_rows(gf_mat_mul(_rows_apply(cfg.frbi, u_rows, cfg), Z.vmat.T, cfg), cfg)


def f_preimage(Z: Bt1Module, u_rows):
    """F^{-1}(U) = sigma^{-1} of the linear preimage under fmat."""
    cfg = Z.cfg
    pre = _preimage_linear(Z.fmat, u_rows, cfg)
    return space_rows(_rows_apply(cfg.frbi, pre, cfg), cfg)


def v_preimage(Z: Bt1Module, u_rows):
    """V^{-1}(U) = sigma of the linear preimage under vmat."""
    cfg = Z.cfg
    pre = _preimage_linear(Z.vmat, u_rows, cfg)
    return space_rows(_rows_apply(cfg.frb, pre, cfg), cfg)


# ------------------------------------------------- canonical filtration

def canonical_filtration(Z: Bt1Module):
    """Closure of {0, whole} under F and V^{-1}; returns (flag, signature).

    flag: tuple of canonical row bases sorted by dimension (totally
    ordered by inclusion for valid modules); signature: tuple of triples
    (dim U, dim F(U), dim V^{-1}(U)).
    """
    cfg = Z.cfg
    h = Z.h
    members = {}

    def add(rows):
        key = (rows.shape[0], rows.tobytes())
        if key not in members:
            members[key] = rows
            return True
        return False

    add(zero_rows(h))
    add(full_rows(h))
    for sweep in range(4 * h + 1):
        changed = False
        for rows in list(members.values()):
            changed |= add(f_image(Z, rows))
            changed |= add(v_preimage(Z, rows))
        if not changed:
            break
    else:
        raise ConventionError('canonical filtration did not close after %d sweeps' % (4 * h))
    flag = tuple(sorted(members.values(), key=lambda r: (r.shape[0], r.tobytes())))
    for a, b in zip(flag, flag[1:]):
        if intersect_dim(a, b, cfg) != space_dim(a):
            raise ConventionError('canonical filtration is not totally ordered')
    sig = tuple(
        (space_dim(u), space_dim(f_image(Z, u)), space_dim(v_preimage(Z, u)))
        for u in flag)
    return flag, sig


_OPS = ('F', 'Vi', 'V', 'Fi')
_OP_FUN = {'F': f_image, 'Vi': v_preimage, 'V': v_image, 'Fi': f_preimage}


def eo_signature(Z: Bt1Module, depth: int = 1) -> tuple:
    """Isomorphism signature: for each flag member, dimensions of all
    operator words up to the given length applied to it."""
    flag, _ = canonical_filtration(Z)
    out = []
    for u in flag:
        dims = [space_dim(u)]
        for wlen in range(1, depth + 1):
            for word in itertools.product(_OPS, repeat=wlen):
                w = u
                for op in word:
                    w = _OP_FUN[op](Z, w)
                dims.append(space_dim(w))
        out.append(tuple(dims))
    return tuple(out)


@lru_cache(maxsize=None)
def _reference_signatures(h: int, d: int, p: int, r: int):
    """Map signature -> minimal coset rep w, at the shallowest depth
    separating all reference modules of the stratum."""
    from .. import weyl
    from ..polygons import HodgeDatum, mu_and_type, eo_representative
    from .core import shtuka_from_element, bt1_of
    from .gf import field

    cfg = field(p, r)
    hd = HodgeDatum(h, d)
    _, pairs = mu_and_type(hd)
    reps = weyl.min_coset_reps(h, pairs)
    mods = {}
    for w in reps:
        x = eo_representative(hd, w)
        mods[w] = bt1_of(shtuka_from_element(x, cfg))
    depth = 1
    while depth <= h * h:
        sigs = {}
        clash = False
        for w, Z in mods.items():
            s = eo_signature(Z, depth)
            if s in sigs:
                clash = True
                break
            sigs[s] = w
        if not clash:
            return depth, sigs
        depth += 1
    raise ConventionError('reference modules not separated by signatures up to depth %d' % (h * h))


def eo_classify(Z: Bt1Module, d: int = None):
    """The minimal coset representative w whose reference module matches
    Z's signature.  Raises ConventionError when nothing matches."""
    h = Z.h
    if d is None:
        d = Z.dimension
    depth, sigs = _reference_signatures(h, d, Z.cfg.p, Z.cfg.r)
    s = eo_signature(Z, depth)
    w = sigs.get(s)
    if w is None:
        raise ConventionError('signature matches no reference module of stratum (%d, %d)' % (h, d))
    return w


def graded_bt1_from_beginning(B, cfg: FieldConfig) -> Bt1Module:
    """Module with basis e_j, j in C ascending: F e_j = e_{j+n} when
    j+n in C (else 0), V e_j = e_{j+m} when j+m in C (else 0)."""
    elems = B.sorted_elements()
    pos = {j: k for k, j in enumerate(elems)}
    h = len(elems)
    f = np.zeros((h, h), dtype=np.int64)
    v = np.zeros((h, h), dtype=np.int64)
    for j in elems:
        if j + B.n in pos:
            f[pos[j + B.n], pos[j]] = 1
        if j + B.m in pos:
            v[pos[j + B.m], pos[j]] = 1
    return Bt1Module(cfg, f, v, degrees=elems).check()
