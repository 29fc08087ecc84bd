"""Norm axioms, duality, and containment constants."""

import numpy as np
import pytest

from concmeter import normspace as ns

RNG = np.random.default_rng(2024)

NORMS = [
    ns.lp(1, 6),
    ns.lp(1.5, 6),
    ns.lp(2, 6),
    ns.lp(4, 6),
    ns.lp(np.inf, 6),
    ns.NormSpec(dim=6, p=2, transform=RNG.normal(size=(6, 6)) + 4 * np.eye(6)),
]


@pytest.mark.parametrize("norm", NORMS)
def test_positive_homogeneity(norm):
    x = RNG.normal(size=(200, 6))
    c = RNG.normal(size=200)
    lhs = ns.norm_eval(norm, x * c[:, None])
    rhs = np.abs(c) * ns.norm_eval(norm, x)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("norm", NORMS)
def test_triangle_inequality(norm):
    x = RNG.normal(size=(500, 6))
    y = RNG.normal(size=(500, 6))
    assert np.all(ns.norm_eval(norm, x + y)
                  <= ns.norm_eval(norm, x) + ns.norm_eval(norm, y) + 1e-12)


@pytest.mark.parametrize("norm", NORMS)
def test_definite_at_zero(norm):
    assert ns.norm_eval(norm, np.zeros(6)) == 0.0
    x = RNG.normal(size=(50, 6))
    assert np.all(ns.norm_eval(norm, x) > 1e-12)


def test_norm_eval_examples():
    assert ns.norm_eval(ns.lp(2, 2), np.array([3.0, 4.0])) == pytest.approx(5.0)
    assert ns.norm_eval(ns.lp(np.inf, 3), np.array([1.0, -2.0, 0.5])) == 2.0
    e2 = np.zeros(5)
    e2[2] = 1.0
    assert ns.norm_eval(ns.lp(1, 5), e2) == 1.0


def test_large_p_no_overflow():
    x = np.full(4, 1e200)
    assert np.isfinite(ns.norm_eval(ns.lp(300, 4), x))


def test_norm_eval_errors():
    with pytest.raises(ValueError):
        ns.norm_eval(ns.lp(2, 3), np.ones(4))
    with pytest.raises(ValueError):
        ns.norm_eval(ns.lp(2, 3), np.array([1.0, np.nan, 0.0]))


def test_dual_examples():
    assert ns.dual_norm(ns.lp(1, 4)).p == np.inf
    assert ns.dual_norm(ns.lp(np.inf, 4)).p == 1.0
    assert ns.dual_norm(ns.lp(2, 4)).p == 2.0
    assert ns.dual_norm(ns.lp(4, 4)).p == pytest.approx(4.0 / 3.0)


@pytest.mark.parametrize("norm", NORMS)
def test_dual_involution(norm):
    dd = ns.dual_norm(ns.dual_norm(norm))
    x = RNG.normal(size=(200, 6))
    assert np.allclose(ns.norm_eval(dd, x), ns.norm_eval(norm, x),
                       rtol=1e-12, atol=1e-12)


def test_lp_monotonicity_in_p():
    x = RNG.normal(size=(300, 6))
    for p, q in [(1, 1.5), (1.5, 2), (2, 4), (4, np.inf)]:
        assert np.all(ns.norm_eval(ns.lp(q, 6), x)
                      <= ns.norm_eval(ns.lp(p, 6), x) + 1e-12)


def test_containment_closed_forms():
    n = 7
    cc = ns.containment_constant(ns.lp(2, n), ns.lp(1, n))
    assert cc.exact and cc.scale == 1.0 and cc.lam == pytest.approx(np.sqrt(n))
    cc = ns.containment_constant(ns.lp(1.2, n), ns.lp(3, n))
    assert cc.exact
    assert cc.scale * cc.lam == pytest.approx(1.0)
    assert cc.lam == pytest.approx(n ** (1 / 1.2 - 1 / 3))
    cc = ns.containment_constant(ns.lp(2, n), ns.lp(2, n))
    assert cc.lam == 1.0 and cc.scale == 1.0


@pytest.mark.parametrize("pair", [(1, 2), (2, 1), (1.5, np.inf), (2, 4)])
def test_exact_containment_zero_violations(pair):
    # 1e5 random points must satisfy both sandwich sides with 1e-9 slack
    n = 5
    K, L = ns.lp(pair[0], n), ns.lp(pair[1], n)
    cc = ns.containment_constant(K, L)
    assert cc.exact
    x = RNG.normal(size=(100000, n))
    vk = ns.norm_eval(K, x)
    vl = ns.norm_eval(L, x)
    assert np.all(cc.scale * vk <= vl * (1 + 1e-9))
    assert np.all(vl <= cc.scale * cc.lam * vk * (1 + 1e-9))


def test_heuristic_containment_flagged_and_sound():
    n = 5
    K = ns.lp(2, n)
    L = ns.NormSpec(dim=n, p=1, transform=RNG.normal(size=(n, n)) + 3 * np.eye(n))
    cc = ns.containment_constant(K, L)
    assert not cc.exact
    x = RNG.normal(size=(20000, n))
    ratios = ns.norm_eval(L, x) / ns.norm_eval(K, x)
    # heuristic sandwich can only be too narrow, never wrong on probed dirs
    assert ratios.min() >= cc.scale * (1 - 0.2)
    assert cc.lam >= 1.0


def test_transform_validation():
    with pytest.raises(ValueError):
        ns.NormSpec(dim=3, p=2, transform=np.zeros((3, 3)))
    bad = np.diag([1.0, 1.0, 1e-12])
    with pytest.raises(ValueError):
        ns.NormSpec(dim=3, p=2, transform=bad)
    with pytest.raises(ValueError):
        ns.containment_constant(ns.lp(2, 3), ns.lp(2, 4))


def test_normalize_containment():
    n = 6
    K, L = ns.lp(1.2, n), ns.lp(3, n)
    L_r, cc = ns.normalize_containment(K, L)
    x = RNG.normal(size=(5000, n))
    vk = ns.norm_eval(K, x)
    vl = ns.norm_eval(L_r, x)
    assert np.all(vk <= vl * (1 + 1e-9))
    assert np.all(vl <= cc.lam * vk * (1 + 1e-9))


def test_serialization_roundtrip():
    for norm in NORMS:
        back = ns.NormSpec.from_config(norm.to_config())
        x = RNG.normal(size=(20, 6))
        assert np.allclose(ns.norm_eval(back, x), ns.norm_eval(norm, x))
