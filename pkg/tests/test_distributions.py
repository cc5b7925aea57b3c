import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from hypothesis import given
from hypothesis import strategies as st

from resilife.distributions import (
    DomainError,
    Empirical,
    Exponential,
    HazardDefined,
    HyperExponential,
    LogLogistic,
    MeanUndefinedError,
    Quantity,
    Tabulated,
    Weibull,
    equilibrium,
    evaluate,
    residual_at_age,
)

XS = np.linspace(0.0, 6.0, 61)
HYP = HyperExponential([0.25, 0.75], [1.0, 2.0])

positive = st.floats(0.2, 5.0)


def families():
    return [
        Exponential(1.5),
        Weibull(2.0, 1.0),
        Weibull(0.7, 2.0),
        HYP,
        LogLogistic(3.0, 1.0),
        HazardDefined(lambda t: t + t**3 / 3, lambda t: 1 + t * t, "cubic"),
    ]


@pytest.mark.parametrize("dist", families(), ids=repr)
def test_sf_pdf_hazard_are_consistent(dist):
    xs = np.linspace(0.01, 4.0, 50)
    sf, pdf, haz = dist.sf(xs), dist.pdf(xs), dist.hazard(xs)
    np.testing.assert_allclose(haz, pdf / sf, rtol=1e-12)
    np.testing.assert_allclose(dist.cdf(xs), 1 - sf, atol=1e-15)
    # density integrates to the sf drop
    grid = np.linspace(0.01, 4.0, 4001)
    mass = trapezoid(dist.pdf(grid), grid)
    assert mass == pytest.approx(float(dist.sf(0.01) - dist.sf(4.0)), rel=1e-5)


@pytest.mark.parametrize("dist", families(), ids=repr)
def test_mrl_matches_tail_integral_over_sf(dist):
    xs = np.array([0.0, 0.3, 1.0, 2.5])
    tail = np.array([integrate_tail(dist, x) for x in xs])
    np.testing.assert_allclose(dist.mrl(xs), tail / dist.sf(xs), rtol=1e-7)


def integrate_tail(dist, x):
    from scipy.integrate import quad

    return quad(lambda u: float(dist.sf(u)), x, np.inf, epsabs=1e-13, epsrel=1e-11, limit=200)[0]


@pytest.mark.parametrize("dist", families(), ids=repr)
def test_quantile_inverts_sf(dist):
    p = np.array([0.999, 0.9, 0.5, 0.1, 1e-6])
    x = dist.isf(p)
    np.testing.assert_allclose(dist.sf(x), p, rtol=1e-9)


def test_isf_edges():
    assert Weibull(2, 1).isf(1.0) == 0.0
    assert Weibull(2, 1).isf(0.0) == np.inf


def test_exponential_closed_forms():
    d = Exponential(2.0)
    assert d.mean() == 0.5
    np.testing.assert_allclose(d.mrl(XS), 0.5)
    np.testing.assert_allclose(d.hazard(XS), 2.0)
    np.testing.assert_allclose(d.reversed_hazard(XS[1:]), 2 * np.exp(-2 * XS[1:]) / (1 - np.exp(-2 * XS[1:])))


def test_weibull_mean_and_integrated_sf():
    d = Weibull(2.0, 1.0)
    assert d.mean() == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    # int_1^inf exp(-u^2) du = sqrt(pi)/2 erfc(1)
    assert d.integrated_sf(1.0) == pytest.approx(math.sqrt(math.pi) / 2 * math.erfc(1.0), rel=1e-12)


def test_hyperexponential_hazard_from_its_sf():
    # (e^t + 6) / (e^t + 3): 1.75 at the origin
    assert HYP.hazard(0.0) == pytest.approx(1.75)
    t = np.array([0.5, 2.0, 7.0])
    np.testing.assert_allclose(HYP.hazard(t), (np.exp(t) + 6) / (np.exp(t) + 3), rtol=1e-13)
    assert HYP.mean() == pytest.approx(0.625)


def test_hyperexponential_deep_tail_stays_finite():
    assert np.isfinite(HYP.logsf(2000.0))
    assert HYP.logsf(2000.0) == pytest.approx(-2000 + math.log(0.25), rel=1e-12)


def test_parameter_validation():
    with pytest.raises(ValueError):
        Exponential(0)
    with pytest.raises(ValueError):
        Weibull(-1, 1)
    with pytest.raises(ValueError):
        HyperExponential([0.5, 0.6], [1, 2])
    with pytest.raises(ValueError):
        LogLogistic(1, 0)


def test_loglogistic_mean_exists_only_above_shape_one():
    assert LogLogistic(2.0, 1.0).mean() == pytest.approx(math.pi / 2)
    assert not LogLogistic(1.0, 1.0).has_finite_mean
    with pytest.raises(MeanUndefinedError):
        LogLogistic(1.0, 1.0).mean()
    assert LogLogistic(1.0, 1.0).mrl(1.0) == np.inf


def test_tabulated_interpolates_and_reads_csv(tmp_path):
    path = tmp_path / "life.csv"
    path.write_text("x,sf\n0,1\n1,0.5\n2,0.25\n")
    d = Tabulated.from_csv(path)
    assert d.sf(1.0) == pytest.approx(0.5)
    assert 0.25 < d.sf(1.5) < 0.5
    assert d.mean() > 0


@pytest.mark.parametrize(
    "text",
    ["x,y\n0,1\n1,0.5\n", "x,sf\n0,0.9\n1,0.5\n", "x,sf\n0,1\n1,0.5\n0.5,0.4\n", "x,sf\n0,1\n1,0.5\n2,0.7\n"],
)
def test_tabulated_rejects_malformed_files(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ValueError):
        Tabulated.from_csv(path)


def test_empirical_sf_and_mean():
    d = Empirical([1.0, 2.0, 3.0, 4.0])
    assert d.sf(2.5) == 0.5
    assert d.mean() == 2.5
    with pytest.raises(DomainError):
        d.pdf(1.0)


def test_residual_at_age_is_shifted_ratio():
    r = residual_at_age(Weibull(2.0, 1.0), 0.7)
    np.testing.assert_allclose(r.sf(XS), np.exp(-((XS + 0.7) ** 2) + 0.49), rtol=1e-13)
    with pytest.raises(DomainError):
        residual_at_age(Weibull(2, 1), -1)


def test_equilibrium_of_weibull_is_erfc():
    e = equilibrium(Weibull(2.0, 1.0))
    assert e.sf(1.0) == pytest.approx(0.157299207050285130658779364917, rel=1e-10)


def test_equilibrium_needs_a_mean():
    with pytest.raises(MeanUndefinedError):
        equilibrium(LogLogistic(1.0, 1.0))


def test_evaluate_dispatches_on_quantity():
    d = Exponential(1.0)
    for q in Quantity:
        assert np.all(np.isfinite(evaluate(d, q, np.array([0.5, 1.0]))))


@given(positive, positive, st.floats(0.0, 3.0))
def test_weibull_shape_decides_hazard_direction(shape, scale, x):
    d = Weibull(shape, scale)
    h1, h2 = d.hazard(x + 0.1), d.hazard(x + 0.2)
    if shape > 1:
        assert h2 >= h1
    elif shape < 1:
        assert h2 <= h1


@given(st.floats(0.05, 0.95), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0, 5))
def test_hyperexponential_sf_is_the_weighted_sum(p, a, b, x):
    d = HyperExponential([p, 1 - p], [a, b])
    assert d.sf(x) == pytest.approx(p * math.exp(-a * x) + (1 - p) * math.exp(-b * x), rel=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_sampling_is_seed_deterministic(seed):
    d = Weibull(2.0, 1.0)
    np.testing.assert_array_equal(d.sample(50, seed), d.sample(50, seed))
