"""Sampler laws, radial CDFs, and the incomplete-gamma kernel."""

import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from concmeter import measures as ms
from concmeter import normspace as ns

N_BIG = 100000


# ---------------------------------------------------------------------------
# gamma_cdf / gamma_quantile
# ---------------------------------------------------------------------------

def test_gamma_cdf_closed_forms():
    x = np.linspace(0.0, 20.0, 200)
    assert np.allclose(ms.gamma_cdf(1.0, x), 1.0 - np.exp(-x), atol=1e-13)
    # shape 2: 1 - e^-x (1 + x)
    assert ms.gamma_cdf(2.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0) * 3.0,
                                                   abs=1e-13)
    assert ms.gamma_cdf(7.0, 0.0) == 0.0


@pytest.mark.parametrize("shape", [0.3, 1.0, 4.5, 64.0, 700.0, 2048.0])
def test_gamma_cdf_against_scipy(shape):
    x = np.linspace(0.0, 3.0 * shape + 20.0, 500)
    assert np.max(np.abs(ms.gamma_cdf(shape, x)
                         - special.gammainc(shape, x))) < 1e-12


def test_gamma_cdf_validation():
    with pytest.raises(ValueError):
        ms.gamma_cdf(4096.0, 1.0)
    with pytest.raises(ValueError):
        ms.gamma_cdf(2.0, np.nan)
    with pytest.raises(ValueError):
        ms.gamma_cdf(2.0, -1.0)


def test_gamma_log_cdf_deep_tail():
    # log CDF must agree with log(CDF) where both are representable and
    # keep full meaning far below the underflow threshold
    a = 64.0
    x = np.array([1.0, 5.0, 30.0])
    assert np.allclose(ms.gamma_log_cdf(a, x), np.log(ms.gamma_cdf(a, x)),
                       rtol=1e-12)
    deep = ms.gamma_log_cdf(a, 1e-3)
    expected = (a * math.log(1e-3) - 1e-3 - math.lgamma(a + 1.0)
                + math.log1p(1e-3 / (a + 1.0)))
    assert deep == pytest.approx(expected, abs=1e-6)


def test_gamma_quantile_roundtrip():
    q = np.array([1e-6, 0.001, 0.3, 0.5, 0.9, 0.999])
    for a in (0.7, 3.0, 64.0):
        x = ms.gamma_quantile(a, q)
        assert np.max(np.abs(ms.gamma_cdf(a, x) - q)) < 1e-12


def test_gamma_quantile_log_roundtrip():
    a = 32.0
    lq = np.array([-1000.0, -700.0, -300.0, -50.0, -2.0])
    x = ms.gamma_quantile_log(a, lq)
    assert np.max(np.abs(ms.gamma_log_cdf(a, x) - lq) / np.abs(lq)) < 1e-9


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def test_cube_marginals_uniform():
    batch = ms.sample(ms.uniform_ball(ns.lp(np.inf, 4)), N_BIG, seed=1)
    for k in range(4):
        d = stats.kstest(batch.data[:, k], stats.uniform(loc=-1, scale=2).cdf)
        assert d.statistic <= 0.01


def test_cone_surface_radius_exact():
    for p in (1.0, 2.0, np.inf):
        norm = ns.lp(p, 9)
        batch = ms.sample(ms.cone_surface(norm), 2000, seed=2)
        assert np.max(np.abs(ns.norm_eval(norm, batch.data) - 1.0)) <= 1e-12


def test_haar_sphere_matches_cone_l2():
    batch = ms.sample(ms.haar_sphere(7), 2000, seed=3)
    assert np.max(np.abs(np.linalg.norm(batch.data, axis=1) - 1.0)) <= 1e-12


def test_l1_ball_2d_radial_law_with_rejection_oracle():
    # oracle: uniform on the square, accepted inside the cross-polytope
    rng = np.random.default_rng(99)
    pts = rng.uniform(-1, 1, size=(400000, 2))
    pts = pts[np.abs(pts).sum(axis=1) <= 1.0][:50000]
    oracle_r = np.sort(np.abs(pts).sum(axis=1))
    grid = (np.arange(1, oracle_r.size + 1) - 0.5) / oracle_r.size
    assert np.max(np.abs(oracle_r ** 2 - grid)) <= 0.015  # law is r^2

    batch = ms.sample(ms.uniform_ball(ns.lp(1, 2)), N_BIG, seed=4)
    r = np.sort(ns.norm_eval(ns.lp(1, 2), batch.data))
    pos = (np.arange(1, N_BIG + 1) - 0.5) / N_BIG
    assert np.max(np.abs(r ** 2 - pos)) <= 0.01


@pytest.mark.parametrize("p,n", [(1.0, 3), (1.5, 6), (2.0, 5), (np.inf, 4)])
def test_ball_radial_law(p, n):
    norm = ns.lp(p, n)
    batch = ms.sample(ms.uniform_ball(norm), N_BIG, seed=5)
    r = np.sort(ns.norm_eval(norm, batch.data))
    pos = (np.arange(1, N_BIG + 1) - 0.5) / N_BIG
    ks = np.max(np.abs(r ** n - pos))
    assert ks <= 1.36 / math.sqrt(N_BIG) + 0.005


def test_transformed_ball_supported_in_body():
    rng = np.random.default_rng(12)
    t = rng.normal(size=(4, 4)) + 3 * np.eye(4)
    norm = ns.NormSpec(dim=4, p=2, transform=t)
    batch = ms.sample(ms.uniform_ball(norm), 20000, seed=6)
    r = ns.norm_eval(norm, batch.data)
    assert r.max() <= 1.0 + 1e-12
    pos = (np.arange(1, 20001) - 0.5) / 20000
    assert np.max(np.abs(np.sort(r) ** 4 - pos)) <= 0.02


def test_ggp_density_normalization():
    # numeric integral of c_p^{-1} exp(-|t|^p / p) over R equals 1
    for p in (1.0, 1.3, 1.7, 2.0):
        c_p = ms.ggp_normalizer(p)
        val, err = integrate.quad(lambda t: math.exp(-abs(t) ** p / p) / c_p,
                                  -np.inf, np.inf)
        assert abs(val - 1.0) <= 1e-9


@pytest.mark.parametrize("p,n", [(1.0, 5), (1.5, 4), (2.0, 6)])
def test_ggp_radial_gamma_law(p, n):
    batch = ms.sample(ms.ggp(p, n), N_BIG, seed=7)
    w = (np.abs(batch.data) ** p).sum(axis=1) / p
    assert stats.kstest(w, "gamma", args=(n / p,)).statistic <= 0.01


def test_gaussian_coordinates():
    batch = ms.sample(ms.gaussian(3), N_BIG, seed=8)
    assert stats.kstest(batch.data[:, 1], "norm").statistic <= 0.01


def test_symmetry_of_batch_means():
    for spec in [ms.uniform_ball(ns.lp(1, 6)), ms.cone_surface(ns.lp(2, 6)),
                 ms.ggp(1.5, 6), ms.gaussian(6), ms.haar_sphere(6)]:
        batch = ms.sample(spec, 50000, seed=9)
        sd = batch.data.std(axis=0)
        bound = 5.0 * sd / math.sqrt(batch.count)
        assert np.all(np.abs(batch.data.mean(axis=0)) <= bound)


def test_batch_determinism_and_immutability():
    spec = ms.ggp(1.5, 4)
    a = ms.sample(spec, 3000, seed=10)
    b = ms.sample(spec, 3000, seed=10)
    assert np.array_equal(a.data, b.data)
    with pytest.raises(ValueError):
        a.data[0, 0] = 7.0


def test_sample_validation():
    with pytest.raises(ValueError):
        ms.sample(ms.gaussian(3), 0, seed=1)
    with pytest.raises(ValueError):
        ms.MeasureSpec("ggp", 4, p=3.0)
    with pytest.raises(ValueError):
        ms.MeasureSpec("nonsense", 4)


def test_batch_csv_export(tmp_path):
    batch = ms.sample(ms.gaussian(3), 50, seed=11)
    path = tmp_path / "batch.csv"
    ms.batch_to_csv(batch, path)
    back = np.loadtxt(path, delimiter=",")
    assert np.allclose(back, batch.data)


def test_measure_spec_roundtrip():
    for spec in [ms.uniform_ball(ns.lp(np.inf, 3)), ms.ggp(1.2, 5),
                 ms.haar_sphere(4)]:
        back = ms.MeasureSpec.from_config(spec.to_config())
        assert back == spec


# ---------------------------------------------------------------------------
# Radial CDFs
# ---------------------------------------------------------------------------

def test_radial_cdf_ball_analytic():
    norm = ns.lp(1, 3)
    cdf = ms.radial_cdf(ms.uniform_ball(norm), norm)
    assert cdf.source == "analytic:ball"
    r = np.linspace(0, 1, 11)
    assert np.allclose(cdf.eval(r), r ** 3)
    assert cdf.median == pytest.approx(2 ** (-1 / 3))


def test_radial_cdf_ggp_entries():
    cdf = ms.radial_cdf(ms.ggp(1.0, 5), ns.lp(1, 5))
    assert cdf.source == "analytic:ggp"
    r = np.linspace(0.0, 20.0, 50)
    assert np.allclose(cdf.eval(r), special.gammainc(5, r), atol=1e-12)

    chi = ms.radial_cdf(ms.ggp(2.0, 6), ns.lp(2, 6))
    assert np.allclose(chi.eval(r), special.gammainc(3, r ** 2 / 2), atol=1e-12)
    # the gaussian alias shares the chi law
    alias = ms.radial_cdf(ms.gaussian(6), ns.lp(2, 6))
    assert np.allclose(alias.eval(r), chi.eval(r))


@pytest.mark.parametrize("make", [
    lambda: ms.radial_cdf(ms.uniform_ball(ns.lp(2, 4)), ns.lp(2, 4)),
    lambda: ms.radial_cdf(ms.ggp(1.5, 4), ns.lp(1.5, 4)),
    lambda: ms.radial_cdf(ms.haar_sphere(4), ns.lp(1, 4)),  # empirical path
])
def test_radial_cdf_quantile_inverse(make):
    cdf = make()
    u = np.linspace(0.001, 0.999, 200)
    assert np.max(np.abs(cdf.eval(cdf.quantile(u)) - u)) <= 1e-9


def test_radial_cdf_monotone_and_fallback_flag():
    cdf = ms.radial_cdf(ms.uniform_ball(ns.lp(2, 4)), ns.lp(1, 4))
    assert cdf.source == "empirical"
    r = np.linspace(0, 3, 300)
    assert np.all(np.diff(cdf.eval(r)) >= 0.0)


def test_radial_cdf_monte_carlo_consistency():
    # ggp(1) radii against the analytic Gamma law
    cdf = ms.radial_cdf(ms.ggp(1.0, 5), ns.lp(1, 5))
    batch = ms.sample(ms.ggp(1.0, 5), N_BIG, seed=12)
    r = np.sort(ns.norm_eval(ns.lp(1, 5), batch.data))
    pos = (np.arange(1, N_BIG + 1) - 0.5) / N_BIG
    assert np.max(np.abs(cdf.eval(r) - pos)) <= 0.01
