r"""Cross-checks between the matrix-level computations.

Everything here is oracle-grade: independent routes to the same value
compared on random inputs.  The CLI exposes the suite; tests reuse its
pieces with fixed seeds.
"""

import numpy as np

from ..polygons import HodgeDatum, mu_and_type, eo_representative
from .. import weyl
from .bt1 import eo_classify
from .core import (bt1_of, newton_polygon_of, sample_shtuka,
                   shtuka_from_element, LocalShtuka)
from .gf import FieldConfig
from .reduction import iwahori_class_of, random_iwahori
from . import polymat as PM

__all__ = ['run_consistency_suite']


def _check_sample_invariants(hd, cfg, deg, rng):
    sh = sample_shtuka(hd, cfg, deg=deg, rng=rng)
    Z = bt1_of(sh)
    Z.check()
    ok = Z.dimension == hd.dimension
    P = newton_polygon_of(sh)
    ok = ok and P.height == hd.height and P.dimension == hd.dimension
    w = eo_classify(Z, hd.dimension)
    return ok, P, w


def _check_class_invariance(hd, cfg, deg, rng):
    # the Iwahori class of i1·A·i2 must not depend on the Iwahori factors
    sh = sample_shtuka(hd, cfg, deg=deg, rng=rng)
    cls0 = iwahori_class_of(sh.amat, cfg)
    i1 = random_iwahori(hd.height, cfg, deg + 1, rng)
    i2 = random_iwahori(hd.height, cfg, deg + 1, rng)
    m = PM.pm_mul(PM.pm_mul(i1, sh.amat, cfg), i2, cfg)
    return iwahori_class_of(m, cfg) == cls0


def _check_monomial_roundtrip(hd, cfg, rng):
    # a random monomial minuscule element must reduce to itself
    h, d = hd.height, hd.dimension
    perm = tuple(int(v) + 1 for v in rng.permutation(h))
    pos = sorted(rng.permutation(h)[:d].tolist())
    lam = tuple(1 if i in pos else 0 for i in range(h))
    from ..affine import Element
    x = Element(lam, perm)
    xm, s = PM.pm_from_element(x)
    return iwahori_class_of(xm, cfg, shift=s) == x


def run_consistency_suite(hd: HodgeDatum, cfg: FieldConfig, samples: int = 50,
                          seed: int = 0, deg: int = 2) -> dict:
    """Random-input agreement checks for one stratum; returns a report
    dict with per-check pass counts and an overall flag."""
    _, pairs = mu_and_type(hd)
    reps = weyl.min_coset_reps(hd.height, pairs)
    report = {
        'stratum': (hd.height, hd.dimension),
        'field': (cfg.p, cfg.r),
        'samples': samples,
        'checks': {},
    }
    inv_ok = 0
    classes = {}
    polys = {}
    for k in range(samples):
        rng = np.random.default_rng([seed, k])
        ok, P, w = _check_sample_invariants(hd, cfg, deg, rng)
        inv_ok += bool(ok)
        classes[w] = classes.get(w, 0) + 1
        key = str(P)
        polys[key] = polys.get(key, 0) + 1
    report['checks']['residue_and_polygon'] = {'pass': inv_ok, 'of': samples}
    report['eo_counts'] = {str(list(w)): c for w, c in sorted(classes.items())}
    report['np_counts'] = dict(sorted(polys.items()))

    cls_ok = 0
    n_cls = max(1, samples // 2)
    for k in range(n_cls):
        rng = np.random.default_rng([seed + 1, k])
        cls_ok += bool(_check_class_invariance(hd, cfg, deg, rng))
    report['checks']['iwahori_invariance'] = {'pass': cls_ok, 'of': n_cls}

    mono_ok = 0
    n_mono = max(1, samples // 2)
    for k in range(n_mono):
        rng = np.random.default_rng([seed + 2, k])
        mono_ok += bool(_check_monomial_roundtrip(hd, cfg, rng))
    report['checks']['monomial_roundtrip'] = {'pass': mono_ok, 'of': n_mono}

    ref_ok = 0
    for w in reps:
        x = eo_representative(hd, w)
        Z = bt1_of(shtuka_from_element(x, cfg))
        ref_ok += bool(eo_classify(Z, hd.dimension) == w)
    report['checks']['reference_fixed_points'] = {'pass': ref_ok, 'of': len(reps)}

    report['ok'] = all(c['pass'] == c['of'] for c in report['checks'].values())
    return report
