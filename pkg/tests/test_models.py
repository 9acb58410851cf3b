import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import stats

from qcorr._rng import substream
from qcorr.dist import frechet_cdf, frechet_rvs
from qcorr.models import (
    MODELS,
    TAIL_DEPENDENT,
    TAIL_INDEPENDENT,
    ModelSpec,
    generate,
    gumbel_copula_sample,
    m4_limit,
    m4_pair,
    marginal_cdf,
    default_spec,
    simulated_m4_coeffs,
)

EXAMPLE_COEFFS = ((0.3, 0.6), (0.7, 0.4))


def test_tail_classes_partition():
    assert sorted(TAIL_DEPENDENT + TAIL_INDEPENDENT) == list("abcdefgh")


@pytest.mark.parametrize("model", MODELS)
def test_reproducible(model):
    kw = {"m4_coeffs": EXAMPLE_COEFFS} if model == "m4" else {}
    spec = default_spec(model, 200, seed=5) if model != "m4" else ModelSpec("m4", 200, 5, **kw)
    a, b = generate(spec), generate(spec)
    assert_array_equal(a.xs, b.xs)
    assert_array_equal(a.ys, b.ys)
    assert a.n == 200 and np.all(np.isfinite(a.xs))


@pytest.mark.parametrize(
    "kw",
    [
        {"model": "b", "n": 5},
        {"model": "f", "n": 5},
        {"model": "h", "n": 5, "rho": 0.5},
        {"model": "m4", "n": 5},
        {"model": "z", "n": 5},
        {"model": "b", "n": 5, "theta": 1.5},
        {"model": "a", "n": 0},
    ],
)
def test_spec_errors(kw):
    with pytest.raises(ValueError):
        ModelSpec(**kw)


def test_model_e_identity():
    s = generate(default_spec("e", 10_000, seed=1))
    assert_allclose(1 / s.xs + 1 / s.ys, 1.0, rtol=1e-12)


@pytest.mark.parametrize("model", ["a", "b", "c", "d"])
def test_frechet_margins(model):
    s = generate(default_spec(model, 100_000, seed=2))
    assert stats.kstest(s.xs, frechet_cdf).statistic < 0.01
    assert stats.kstest(s.ys, frechet_cdf).statistic < 0.01


@pytest.mark.parametrize("model", ["e", "f", "g", "h"])
def test_marginal_cdf_matches_samples(model):
    spec = default_spec(model, 100_000, seed=3)
    s = generate(spec)
    F = marginal_cdf(spec)
    assert stats.kstest(s.xs, F).statistic < 0.01
    assert stats.kstest(s.ys, F).statistic < 0.01


def test_model_f_correlation():
    s = generate(default_spec("f", 100_000, seed=4))
    assert abs(np.corrcoef(s.xs, s.ys)[0, 1] - 0.8) < 0.01


def test_model_g_quotient_identity():
    spec = default_spec("g", 1000, seed=6)
    s = generate(spec)
    # replay the stream: shared exponential first, then the two Frechet factors
    rng = substream(6, "model", "g")
    rng.standard_exponential(1000)
    z1, z2 = frechet_rvs(rng, 1000), frechet_rvs(rng, 1000)
    assert_allclose(s.xs / s.ys, z1 / z2, rtol=1e-13)


class TestGumbel:
    def test_uniform_margins(self):
        u = gumbel_copula_sample(0.4472, 50_000, seed=1)
        assert u.shape == (50_000, 2)
        for j in range(2):
            assert stats.kstest(u[:, j], "uniform").statistic < 0.01

    def test_independence_at_theta_one(self):
        u = gumbel_copula_sample(1.0, 100_000, seed=2)
        assert abs(stats.kendalltau(u[:, 0], u[:, 1]).statistic) < 0.02

    def test_comonotone_limit(self):
        u = gumbel_copula_sample(0.01, 1000, seed=3)
        assert np.max(np.abs(u[:, 0] - u[:, 1])) < 0.05

    def test_kendall_tau(self):
        u = gumbel_copula_sample(0.4472, 1_000_000, seed=4)
        assert abs(stats.kendalltau(u[:, 0], u[:, 1]).statistic - 0.5528) < 0.01

    def test_theta_domain(self):
        for bad in (0.0, 1.2):
            with pytest.raises(ValueError):
                gumbel_copula_sample(bad, 10)


class TestM4:
    def test_example_limit(self):
        lim = m4_limit(EXAMPLE_COEFFS)
        assert_allclose((lim.c1, lim.c2, lim.q_limit), (1.75, 2.0, 0.7))

    def test_equal_columns(self):
        lim = m4_limit(((0.5, 0.5), (0.5, 0.5)))
        assert lim.c1 == lim.c2 == 1.0 and lim.q_limit == 1.0
        s, _ = m4_pair(((0.5, 0.5), (0.5, 0.5)), 50, seed=1)
        assert_array_equal(s.xs, s.ys)

    def test_bounds_hold(self):
        s, lim = m4_pair(EXAMPLE_COEFFS, 20_000, seed=2)
        assert np.all(s.xs / s.ys <= lim.c1 * (1 + 1e-12))
        assert np.all(s.ys / s.xs <= lim.c2 * (1 + 1e-12))

    def test_bad_coefficients(self):
        with pytest.raises(ValueError):
            m4_limit(((0.3, 0.6), (0.6, 0.4)))
        with pytest.raises(ValueError):
            m4_limit(((0.0, 0.6), (1.0, 0.4)))

    def test_simulated_coefficients(self):
        a = simulated_m4_coeffs(seed=9)
        assert a.shape == (30, 2) and np.all(a > 0)
        assert_allclose(a.sum(axis=0), 1.0)
        assert_array_equal(a, simulated_m4_coeffs(seed=9))
