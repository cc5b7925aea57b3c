import numpy as np
import pytest

from resilife.distributions import Exponential, Weibull
from resilife.mixing import OrderStatistic
from resilife.mixture import ResidualMixture
from resilife.verify.montecarlo import (
    McConfig,
    independence_check,
    ks_statistic,
    ks_threshold,
    ks_two_sample,
    mc_k_out_n_residuals,
    mc_spacings,
)

EXP1 = Exponential(1.0)
W2 = Weibull(2.0, 1.0)


def test_ks_statistic_small_examples():
    assert ks_statistic([1.0], lambda x: 0.5) == pytest.approx(0.5)
    # two points at the median of a uniform
    assert ks_statistic([0.25, 0.75], lambda x: 1 - x) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        ks_statistic([], lambda x: x)


def test_ks_threshold_scaling():
    assert ks_threshold(10_000) == pytest.approx(1.36 / 100 * 1.5)
    assert ks_threshold(40_000) == pytest.approx(ks_threshold(10_000) / 2)


def test_two_sample_ks_matches_scipy_sign():
    rng = np.random.default_rng(3)
    a = rng.exponential(size=2000)
    assert ks_two_sample(a, a) == 0.0
    assert ks_two_sample(a, a + 1.0) > 0.5


def test_simulation_is_deterministic_per_seed():
    t1, s1 = mc_spacings(W2, 5, 2000, 11)
    t2, s2 = mc_spacings(W2, 5, 2000, 11)
    np.testing.assert_array_equal(s1, s2)
    np.testing.assert_array_equal(t1, t2)
    _, s3 = mc_spacings(W2, 5, 2000, 12)
    assert not np.array_equal(s1, s3)
    cfg = McConfig("exp(1)", 5, 3, 2000, 7)
    np.testing.assert_array_equal(mc_k_out_n_residuals(cfg), mc_k_out_n_residuals(cfg))


def test_exponential_residuals_are_exponential():
    r = mc_k_out_n_residuals(McConfig(EXP1, 5, 2, 20_000, 5))
    assert (r >= 0).all()
    assert ks_statistic(r, EXP1.sf) < ks_threshold(r.size)


def test_weibull_spacing_follows_the_mixture_law():
    _, s = mc_spacings(W2, 5, 20_000, 9)
    mx = ResidualMixture(W2, OrderStatistic(W2, 4, 5))
    assert ks_statistic(s, mx.sf) < ks_threshold(s.size)
    assert ks_statistic(s, W2.sf) > 5 * ks_threshold(s.size)


def test_independence_check():
    rng = np.random.default_rng(1)
    u = rng.random(20_000)
    assert independence_check((u, u)).rejected
    v = rng.random(20_000)
    res = independence_check(np.column_stack([u, v]))
    assert not res.rejected and res.dof == 81
    assert set(res.to_dict()) == {"statistic", "p_value", "dof", "rejected", "level"}


def test_input_validation():
    with pytest.raises(ValueError):
        McConfig(EXP1, 5, 6, 2000, 1)
    with pytest.raises(ValueError):
        McConfig(EXP1, 5, 2, 10, 1)
    with pytest.raises(ValueError):
        mc_k_out_n_residuals(McConfig(EXP1, 5, 5, 2000, 1))
    with pytest.raises(ValueError):
        mc_spacings(EXP1, 1, 2000, 1)
    with pytest.raises(ValueError):
        independence_check((np.zeros(100), np.zeros(100)))
    with pytest.raises(ValueError):
        independence_check((np.zeros(20_000), np.zeros(19_999)))
    with pytest.raises(ValueError):
        independence_check((np.zeros(20_000), np.zeros(20_000)))
