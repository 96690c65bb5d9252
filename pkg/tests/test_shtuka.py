"""Local shtukas: residues, classification, Newton polygons, reduction."""

import dataclasses

import numpy as np
import pytest

from pkernels import affine
from pkernels.affine import Element
from pkernels.errors import ConventionError
from pkernels.polygons import (HodgeDatum, enumerate_polygons, eo_representative,
                               mu_and_type, parse_polygon, x_of_polygon)
from pkernels.semimodules import cochar_to_beginning, enumerate_cochar_block
from pkernels.shtuka import (Bt1Module, bt1_of, canonical_filtration, eo_classify,
                             field, graded_bt1_from_beginning, iwahori_class_of,
                             iwahori_orbit_size, minimal_shtuka, newton_polygon_of,
                             run_consistency_suite, sample_shtuka,
                             shtuka_from_element, sigma_conjugate_sample)
from pkernels.shtuka import polymat as PM
from pkernels.shtuka.reduction import random_iwahori
from pkernels import weyl


# ---------------------------------------------------------------- bt1

def test_bt1_check_rejects_bad_pair(cfg):
    f = np.zeros((2, 2), dtype=np.int64)
    v = np.zeros((2, 2), dtype=np.int64)
    f[0, 0] = 1
    v[0, 0] = 1   # im V = ker F fails: im F = im V = e1
    with pytest.raises(ValueError):
        Bt1Module(cfg, f, v).check()


def test_bt1_of_diag_t_1(cfg):
    Z = bt1_of(shtuka_from_element(Element((1, 0), (1, 2)), cfg))
    assert Z.fmat.tolist() == [[0, 0], [0, 1]]
    assert Z.vmat.tolist() == [[1, 0], [0, 0]]
    assert Z.dimension == 1


def test_bt1_of_omega(cfg):
    Z = bt1_of(shtuka_from_element(affine.omega(2), cfg))
    assert Z.fmat.tolist() == [[0, 1], [0, 0]]
    assert Z.vmat.tolist() == [[0, 1], [0, 0]]


def test_bt1_routes_agree(cfg):
    # the adjugate route must reproduce the witness route
    for seed in range(10):
        hd = HodgeDatum(2 + seed % 3, 1 + seed % 2)
        sh = sample_shtuka(hd, cfg, seed=seed)
        Z1 = bt1_of(sh)
        Z2 = bt1_of(dataclasses.replace(sh, witness=None))
        assert (Z1.fmat == Z2.fmat).all()
        assert (Z1.vmat == Z2.vmat).all()


def test_bt1_dimension_zero(cfg):
    Z = bt1_of(shtuka_from_element(affine.identity(3), cfg))
    assert Z.dimension == 0
    assert not Z.vmat.any()


def test_bt1_semilinear_twist(cfg):
    # V is sigma^{-1}-semilinear: A·frb(vmat) = t·I mod t^2
    sh = sample_shtuka(HodgeDatum(3, 1), cfg, seed=42)
    Z = bt1_of(sh)
    a0 = PM.pm_coeff(sh.amat, 0)
    a1 = PM.pm_coeff(sh.amat, 1)
    v = cfg.frb[Z.vmat]
    # coefficient 0 of A·sigma(V) vanishes, coefficient 1 is the identity
    c0 = PM.gf_mat_mul(a0, v, cfg)
    assert not c0.any()
    c1 = PM.gf_mat_mul(a1, v, cfg)
    # plus a0 times the degree-1 part of the true inverse; only check
    # that F-bar kills im V and ranks match
    assert Z.dimension == sh.dimension


def test_graded_bt1_from_beginning(cfg):
    B = cochar_to_beginning((0, 1), 1, 1)
    Z = graded_bt1_from_beginning(B, cfg)
    assert Z.fmat.tolist() == [[0, 0], [1, 0]]
    assert Z.vmat.tolist() == [[0, 0], [1, 0]]
    # all beginnings of all blocks build valid modules
    for n, m in ((1, 2), (2, 1), (2, 3), (3, 1)):
        for lam in enumerate_cochar_block(n, m):
            Bm = cochar_to_beginning(lam, n, m)
            Zm = graded_bt1_from_beginning(Bm, cfg)
            assert Zm.dimension == n


# ------------------------------------------------------- classification

def test_canonical_filtration_is_flag(cfg):
    for seed in range(8):
        sh = sample_shtuka(HodgeDatum(3, 1), cfg, seed=seed)
        Z = bt1_of(sh)
        flag, sig = canonical_filtration(Z)
        dims = [f.shape[0] for f in flag]
        assert dims[0] == 0 and dims[-1] == Z.fmat.shape[0]
        assert dims == sorted(dims)
        assert len(sig) == len(flag)
        assert all(s[0] == d for s, d in zip(sig, dims))


@pytest.mark.parametrize('h,d', [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_eo_classify_fixes_representatives(cfg, h, d):
    hd = HodgeDatum(h, d)
    _, pairs = mu_and_type(hd)
    for w in weyl.min_coset_reps(h, pairs):
        x = eo_representative(hd, w)
        Z = bt1_of(shtuka_from_element(x, cfg))
        assert eo_classify(Z, d) == w


def test_eo_classify_unknown_signature(cfg):
    # a module whose signature matches no reference of that dimension
    Z = graded_bt1_from_beginning(cochar_to_beginning((0, 0), 1, 1), cfg)
    with pytest.raises(ConventionError):
        eo_classify(Z, 0)           # wrong dimension on purpose


def test_classification_is_conjugation_invariant(cfg):
    # classify(bt1(g·A·sigma(g)^{-1})) == classify(bt1(A)) for unimodular g
    from pkernels.shtuka.core import random_unimodular
    hd = HodgeDatum(3, 1)
    for seed in range(6):
        rng = np.random.default_rng([61, seed])
        sh = sample_shtuka(hd, cfg, seed=seed)
        g = random_unimodular(3, cfg, 2, rng)
        gsi = PM.pm_inv_mod(PM.pm_frob(g, cfg, 1), 6, cfg)
        m = PM.pm_truncate(PM.pm_mul(PM.pm_mul(g, sh.amat, cfg), gsi, cfg), 6)
        from pkernels.shtuka.core import LocalShtuka
        Z1 = bt1_of(sh)
        Z2 = bt1_of(LocalShtuka(cfg, m))
        assert eo_classify(Z1, 1) == eo_classify(Z2, 1)


# ------------------------------------------------------- newton polygons

def test_newton_polygon_pinned(cfg):
    assert str(newton_polygon_of(shtuka_from_element(Element((1, 0), (1, 2)), cfg))) == '0,1'
    assert str(newton_polygon_of(shtuka_from_element(affine.omega(2), cfg))) == '1/2x2'
    assert str(newton_polygon_of(shtuka_from_element(Element((1,), (1,)), cfg))) == '1'
    assert str(newton_polygon_of(shtuka_from_element(Element((0,), (1,)), cfg))) == '0'


@pytest.mark.parametrize('h', [2, 3, 4, 5])
def test_newton_polygon_of_block_elements(cfg, h):
    # the block-diagonal representative of P has Newton polygon P
    for d in range(h + 1):
        for P in enumerate_polygons(HodgeDatum(h, d)):
            sh = shtuka_from_element(x_of_polygon(P), cfg)
            assert newton_polygon_of(sh) == P


def test_minimal_shtuka(cfg):
    P = parse_polygon('1/2x2')
    sh = minimal_shtuka(P, cfg)
    assert newton_polygon_of(sh) == P
    assert sh.dimension == 1


def test_newton_polygon_sigma_conjugation_invariant(cfg):
    from pkernels.shtuka.core import LocalShtuka, random_unimodular
    for seed in range(6):
        rng = np.random.default_rng([62, seed])
        sh = sample_shtuka(HodgeDatum(3, 2), cfg, seed=seed)
        g = random_unimodular(3, cfg, 2, rng)
        gsi = PM.pm_inv_mod(PM.pm_frob(g, cfg, 1), 8, cfg)
        m = PM.pm_truncate(PM.pm_mul(PM.pm_mul(g, sh.amat, cfg), gsi, cfg), 8)
        assert newton_polygon_of(LocalShtuka(cfg, m)) == newton_polygon_of(sh)


# --------------------------------------------------------- reduction

def _random_element(rng, h, spread=1):
    lam = tuple(int(v) for v in rng.integers(-spread, spread + 1, size=h))
    perm = tuple(int(v) for v in rng.permutation(h) + 1)
    return Element(lam, perm)


@pytest.mark.parametrize('h', [2, 3, 4])
def test_iwahori_class_roundtrip(cfg, h):
    for trial in range(30):
        rng = np.random.default_rng([63, h, trial])
        x = _random_element(rng, h)
        a, s = PM.pm_from_element(x)
        got = iwahori_class_of(a, cfg, shift=s,
                               expected_vdet=x.v_det() + h * s)
        assert got == x


@pytest.mark.parametrize('h', [2, 3])
def test_iwahori_class_invariance(cfg, h):
    for trial in range(20):
        rng = np.random.default_rng([64, h, trial])
        x = _random_element(rng, h)
        a, s = PM.pm_from_element(x)
        i1 = random_iwahori(h, cfg, 3, rng)
        i2 = random_iwahori(h, cfg, 3, rng)
        m = PM.pm_mul(PM.pm_mul(i1, a, cfg), i2, cfg)
        got = iwahori_class_of(m, cfg, shift=s, expected_vdet=x.v_det() + h * s)
        assert got == x


def test_iwahori_class_singular(cfg):
    a = PM.pm_zeros(2, 2, 3)
    a[0, 0, 1] = 1   # rank 1
    with pytest.raises(ValueError):
        iwahori_class_of(a, cfg)


def test_orbit_size_is_q_to_length(cfg1):
    # [I : I ∩ xIx^{-1}] = q^{l(x)}
    cases = [
        (affine.omega(2), 1),
        (affine.identity(2), 1),
        (Element((1, 0), (1, 2)), 2),
        (Element((0, 1), (1, 2)), 2),
        (Element((1, 0), (2, 1)), 4),
        (Element((1, -1), (1, 2)), 4),
        (affine.omega(3), 1),
        (Element((1, 0, 0), (1, 2, 3)), 4),
    ]
    for x, want in cases:
        assert iwahori_orbit_size(x, cfg1) == want
        assert want == 2 ** affine.length(x)


def test_orbit_size_q4():
    # same law over F_4
    cfg = field(2, 2)
    x = Element((1, 0), (1, 2))
    assert iwahori_orbit_size(x, cfg) == 4 ** affine.length(x)


# --------------------------------------------------------- sampling

def test_sample_shtuka_deterministic(cfg):
    a = sample_shtuka(HodgeDatum(3, 1), cfg, seed=5)
    b = sample_shtuka(HodgeDatum(3, 1), cfg, seed=5)
    c = sample_shtuka(HodgeDatum(3, 1), cfg, seed=6)
    assert (a.amat == b.amat).all()
    assert not (a.amat.shape == c.amat.shape and (a.amat == c.amat).all())


def test_sample_shtuka_lands_in_stratum(cfg):
    for seed in range(10):
        hd = HodgeDatum(3, 2)
        sh = sample_shtuka(hd, cfg, seed=seed)
        assert sh.dimension == 2
        x = iwahori_class_of(sh.amat, cfg)
        assert affine.in_minuscule_double_coset(x, 3, 2)


def test_sigma_conjugate_sample_deterministic(cfg):
    x = Element((0, 1), (2, 1))
    c1 = sigma_conjugate_sample(x, cfg, trials=8, seed=3)
    c2 = sigma_conjugate_sample(x, cfg, trials=8, seed=3)
    assert c1 == c2
    assert sum(c1.values()) == 8
    for cls in c1:
        assert cls.v_det() == x.v_det()


def test_consistency_suite(cfg):
    rep = run_consistency_suite(HodgeDatum(2, 1), cfg, samples=6, seed=0)
    assert rep['ok']
    assert rep['checks']['reference_fixed_points'] == {'pass': 2, 'of': 2}
    assert sum(rep['eo_counts'].values()) == 6
