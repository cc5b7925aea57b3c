"""The average residual life variable: residual lifetimes mixed over a random age.

``ResidualMixture`` evaluates the survival function, density, hazard, mean
residual life and the conditional law of the age given survival.  Every
integrand is built in log space and scaled by the baseline survival at
``x`` before integration, so the quadrature works on O(1) quantities and
keeps relative accuracy deep in the tail.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .distributions import (
    DomainError,
    LifetimeDistribution,
    MeanUndefinedError,
    _arr,
    _out,
    equilibrium,
)
from .mixing import TINY, Continuous, MixingDistribution, require_density
from .numerics import (
    DEFAULT_TOL,
    QuadratureError,
    integrate_panels,
)

_CHUNK = 1024
# the outer integrand carries inner quadrature noise near quad_tol, so the
# outer rule asks for less
_OUTER_RTOL = 1e-8
_MAX_SPLIT = 4096
SUPPORT_QUANTILE = 1e-9


def _nan_to_neginf(a):
    return np.where(np.isnan(a), -np.inf, a)


class ResidualMixture:
    """Residual life of a ``baseline`` unit whose age is drawn from ``mixing``.

    >>> from resilife.distributions import Exponential
    >>> from resilife.mixing import Degenerate
    >>> mx = ResidualMixture(Exponential(2.0), Degenerate(3.0))
    >>> round(mx.sf(0.5), 12) == round(float(np.exp(-1.0)), 12)
    True
    """

    def __init__(self, baseline: LifetimeDistribution, mixing: MixingDistribution, quad_tol: float = DEFAULT_TOL):
        self.baseline = baseline
        self.mixing = mixing
        self.quad_tol = float(quad_tol)
        edge = mixing.upper_quantile(SUPPORT_QUANTILE)
        if np.isfinite(edge) and not np.isfinite(baseline.logsf(edge)):
            raise DomainError(
                f"mixing mass reaches age {edge:g} where the baseline survival is zero"
            )
        self.closed_form_pdf = mixing.is_discrete and baseline.closed_form_pdf

    def __repr__(self):
        return f"ResidualMixture({self.baseline!r}, {self.mixing!r})"

    # -- core expectations -------------------------------------------------

    def _shift(self, x):
        s = np.asarray(self.baseline.logsf(x), dtype=float)
        return np.where(np.isfinite(s), s, 0.0)

    def _log_expect(self, log_top, x, log_shift=None):
        """log E[exp(log_top(x + Theta) - logsf(Theta))] over a flat ``x``."""
        out = np.empty(x.size)
        for start in range(0, x.size, _CHUNK):
            xs = x[start : start + _CHUNK]
            if log_shift is None:
                shift = self._shift(xs)
            else:
                shift = np.asarray(log_shift(xs), dtype=float)
                shift = np.where(np.isfinite(shift), shift, 0.0)

            def log_g(t, xs=xs, shift=shift):
                top = np.asarray(log_top(xs[:, None] + t[None, :]), dtype=float)
                with np.errstate(invalid="ignore"):
                    val = top - np.asarray(self.baseline.logsf(t), dtype=float)[None, :] - shift[:, None]
                return _nan_to_neginf(val)

            vals = self.mixing.expect_exp(log_g, self.quad_tol)
            with np.errstate(divide="ignore"):
                out[start : start + _CHUNK] = shift + np.log(vals)
        return out

    def _conditional_mean(self, value_fn, x):
        """E[value_fn(x + Theta) | X* > x], weights from the conditional age law."""
        out = np.empty(x.size)
        for start in range(0, x.size, _CHUNK):
            xs = x[start : start + _CHUNK]
            shift = self._shift(xs)
            m = xs.size

            def log_g(t, xs=xs, shift=shift, m=m):
                pts = xs[:, None] + t[None, :]
                with np.errstate(invalid="ignore", divide="ignore"):
                    logw = (
                        np.asarray(self.baseline.logsf(pts), dtype=float)
                        - np.asarray(self.baseline.logsf(t), dtype=float)[None, :]
                        - shift[:, None]
                    )
                    logv = np.log(np.asarray(value_fn(pts), dtype=float))
                return _nan_to_neginf(np.concatenate([logw + logv, logw], axis=0))

            vals = self.mixing.expect_exp(log_g, self.quad_tol)
            out[start : start + _CHUNK] = vals[:m] / vals[m:]
        return out

    def _expect_plain(self, fn, x):
        """E[fn(x, Theta)] for a nonnegative ``fn``, to relative accuracy."""
        out = np.empty(x.size)
        for start in range(0, x.size, _CHUNK):
            xs = x[start : start + _CHUNK]
            res = self.mixing.expect(lambda t, xs=xs: fn(xs[:, None], t[None, :]), self.quad_tol, atol=TINY)
            out[start : start + _CHUNK] = np.atleast_1d(res)
        return out

    # -- distribution-like surface -----------------------------------------

    def logsf(self, x):
        xa = _arr(x)
        return _out(x, self._log_expect(self.baseline.logsf, xa.ravel()).reshape(xa.shape))

    def sf(self, x):
        return _out(x, np.exp(self.logsf(_arr(x))))

    def cdf(self, x):
        xa = _arr(x)
        flat = xa.ravel()
        base = self.baseline

        def failed(xx, t):
            with np.errstate(invalid="ignore"):
                d = np.asarray(base.logsf(xx + t), dtype=float) - np.asarray(base.logsf(t), dtype=float)
            return -np.expm1(_nan_to_neginf(d))

        return _out(x, self._expect_plain(failed, flat).reshape(xa.shape))

    def cumulative_hazard(self, x):
        xa = _arr(x)
        c = np.asarray(self.cdf(xa))
        with np.errstate(divide="ignore"):
            small = -np.log1p(-np.minimum(c, 0.5))
        big = -np.asarray(self.logsf(xa))
        return _out(x, np.where(c < 0.5, small, big))

    def logpdf(self, x):
        xa = _arr(x)
        return _out(x, self._log_expect(self.baseline.logpdf, xa.ravel()).reshape(xa.shape))

    def pdf(self, x):
        return _out(x, np.exp(self.logpdf(_arr(x))))

    def hazard(self, x):
        """Density over survival."""
        xa = _arr(x)
        with np.errstate(invalid="ignore"):
            d = np.asarray(self.logpdf(xa)) - np.asarray(self.logsf(xa))
        return _out(x, np.exp(_nan_to_neginf(d)))

    def hazard_conditional(self, x):
        """Baseline hazard at ``x + Theta`` averaged given survival past ``x``."""
        xa = _arr(x)
        return _out(x, self._conditional_mean(self.baseline.hazard, xa.ravel()).reshape(xa.shape))

    def reversed_hazard(self, x):
        xa = _arr(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _out(x, np.asarray(self.pdf(xa)) / np.asarray(self.cdf(xa)))

    def integrated_sf(self, x):
        """``int_x^inf sf*(u) du`` by direct integration of the mixture sf."""
        return _out(x, np.exp(self.log_integrated_sf(_arr(x))))

    def _log_nu_swapped(self, pts):
        """log E[nu(x + Theta) / sf(Theta)], the tail integral with order swapped."""
        lnu = self.baseline.log_integrated_sf
        return self._log_expect(lnu, pts, lnu)

    def _mesh(self, pts, ls):
        """Refine ``pts`` so no gap is longer than the local mean residual life."""
        scale = np.exp(self._log_nu_swapped(pts) - ls)
        pieces = [pts[:1]]
        for i in range(pts.size - 1):
            w = pts[i + 1] - pts[i]
            step = scale[i] if np.isfinite(scale[i]) and scale[i] > 0 else w
            k = int(min(np.ceil(w / step), _MAX_SPLIT))
            pieces.append(np.linspace(pts[i], pts[i + 1], k + 1)[1:])
        return np.concatenate(pieces), scale[-1]

    def log_integrated_sf(self, x):
        """Log of the tail integral, accumulated in log space from the right.

        The mixture sf is integrated directly between consecutive points of a
        mesh no coarser than the local mean residual life, up to a cut one
        such length past the largest requested point.  Beyond the cut the
        order of integration is swapped, giving ``E[nu(cut + Theta) / sf(Theta)]``
        with ``nu`` the baseline's integrated sf.
        """
        xa = _arr(x)
        if not self.has_finite_mean:
            return _out(x, np.full(xa.shape, np.inf))
        flat = xa.ravel()
        req = np.unique(flat)
        pts, top_scale = self._mesh(req, self._log_expect(self.baseline.logsf, req))
        cut = pts[-1] + (top_scale if np.isfinite(top_scale) and top_scale > 0 else 1.0)
        pts = np.concatenate([pts, [cut]])
        ls = self._log_expect(self.baseline.logsf, pts)
        # gap integrals normalised by the sf at their left end, so each is O(width)
        lo, hi, ls_lo = pts[:-1], pts[1:], ls[:-1]

        def scaled(u, idx):
            return np.exp(self._log_expect(self.baseline.logsf, u) - ls_lo[idx])

        gaps = np.atleast_1d(
            integrate_panels(scaled, lo, hi, _OUTER_RTOL, atol=self.quad_tol * 1e-2, indexed=True).value
        )
        with np.errstate(divide="ignore"):
            log_gaps = np.log(gaps)
        log_mrl = np.empty(pts.size)
        log_mrl[-1] = self._log_nu_swapped(pts[-1:])[0] - ls[-1]
        for i in range(pts.size - 2, -1, -1):
            log_mrl[i] = np.logaddexp(log_gaps[i], log_mrl[i + 1] + ls[i + 1] - ls[i])
        out = (log_mrl + ls)[np.searchsorted(pts, flat)]
        return _out(x, out.reshape(xa.shape))

    def _log_mrl(self, x):
        xa = _arr(x)
        with np.errstate(invalid="ignore"):
            return np.asarray(self.log_integrated_sf(xa)) - np.asarray(self.logsf(xa))

    def mrl(self, x):
        """Tail integral of the mixture sf over the mixture sf."""
        return _out(x, np.exp(_nan_to_neginf(self._log_mrl(x))))

    def mrl_conditional(self, x):
        """Baseline MRL at ``x + Theta`` averaged given survival past ``x``."""
        xa = _arr(x)
        if not self.baseline.has_finite_mean:
            return _out(x, np.full(xa.shape, np.inf))
        return _out(x, self._conditional_mean(self.baseline.mrl, xa.ravel()).reshape(xa.shape))

    @cached_property
    def _mean_via_mrl(self):
        if not self.baseline.has_finite_mean:
            return np.inf
        try:
            return float(self.mixing.expect(lambda t: self.baseline.mrl(t), self.quad_tol))
        except QuadratureError:
            return np.inf

    @property
    def has_finite_mean(self):
        return bool(np.isfinite(self._mean_via_mrl))

    def mean(self) -> float:
        """Tail integral of the mixture sf from zero (authoritative route)."""
        if not self.has_finite_mean:
            raise MeanUndefinedError(f"mean of {self!r} does not exist")
        return float(self.integrated_sf(np.array([0.0]))[0])

    def mean_routes(self) -> dict:
        direct = self.mean()
        via_mrl = self._mean_via_mrl
        return {"direct": direct, "via_mrl": via_mrl, "discrepancy": abs(direct - via_mrl)}

    def isf(self, p):
        return LifetimeDistribution.isf(self, p)

    # -- conditional age ---------------------------------------------------

    def conditional_age_cdf(self, theta, x: float):
        """cdf of the age given survival past ``x``, at ages ``theta``."""
        th = _arr(theta)
        flat = th.ravel()
        logsf_star = float(self.logsf(float(x)))
        if not np.isfinite(logsf_star):
            raise DomainError(f"conditional age law undefined: sf*({x}) = 0")
        base = self.baseline

        def log_w(t):
            with np.errstate(invalid="ignore"):
                return _nan_to_neginf(
                    np.asarray(base.logsf(x + t), dtype=float) - np.asarray(base.logsf(t), dtype=float) - logsf_star
                )

        if self.mixing.is_discrete:
            atoms, weights = self.mixing.atoms, self.mixing.weights
            mass = np.exp(log_w(atoms)) * weights
            cum = np.concatenate([[0.0], np.cumsum(mass)])
            vals = cum[np.searchsorted(atoms, flat, side="right")]
        else:
            dens = self.mixing.dist

            def integrand(t):
                with np.errstate(invalid="ignore"):
                    return np.exp(_nan_to_neginf(log_w(t) + np.asarray(dens.logpdf(t), dtype=float)))

            vals = np.ones_like(flat)
            fin = np.isfinite(flat) & (flat > 0)
            vals[flat <= 0] = 0.0
            if fin.any():
                vals[fin] = np.atleast_1d(
                    integrate_panels(integrand, np.zeros(fin.sum()), flat[fin], self.quad_tol, atol=self.quad_tol).value
                )
        return _out(theta, np.clip(vals, 0.0, 1.0).reshape(th.shape))

    def conditional_age_masses(self, x: float):
        """Atom masses of the age given survival past ``x`` (discrete mixing)."""
        if not self.mixing.is_discrete:
            raise DomainError("atom masses exist only for discrete mixing")
        atoms = self.mixing.atoms
        cdf = self.conditional_age_cdf(atoms, x)
        return atoms, np.diff(np.concatenate([[0.0], cdf]))

    def posterior_age_pdf(self, theta, x: float):
        """Density of the age given the residual life equals ``x``."""
        require_density(self.mixing, "posterior_age_pdf")
        th = _arr(theta)
        lf_star = float(self.logpdf(float(x)))
        if not np.isfinite(lf_star):
            raise DomainError(f"posterior age density undefined: f*({x}) = 0")
        base = self.baseline
        with np.errstate(invalid="ignore"):
            logv = (
                np.asarray(base.logpdf(x + th), dtype=float)
                + np.asarray(self.mixing.dist.logpdf(th), dtype=float)
                - np.asarray(base.logsf(th), dtype=float)
                - lf_star
            )
        return _out(theta, np.exp(_nan_to_neginf(logv)))


def equilibrium_mixture(baseline: LifetimeDistribution, quad_tol: float = DEFAULT_TOL) -> ResidualMixture:
    """Mix over an age drawn from the baseline's equilibrium distribution."""
    return ResidualMixture(baseline, Continuous(equilibrium(baseline)), quad_tol)


def _check_x(x, what):
    if np.any(_arr(x) < 0):
        raise DomainError(f"{what}: x must be >= 0")


def mixture_sf(mx: ResidualMixture, x):
    _check_x(x, "mixture_sf")
    return mx.sf(x)


def mixture_pdf(mx: ResidualMixture, x):
    _check_x(x, "mixture_pdf")
    return mx.pdf(x)


def _require_alive(mx, x, what):
    if np.any(~np.isfinite(np.asarray(mx.logsf(x)))):
        raise DomainError(f"{what}: mixture survival underflows at some requested x")


def mixture_hazard(mx: ResidualMixture, x):
    _check_x(x, "mixture_hazard")
    _require_alive(mx, x, "mixture_hazard")
    return mx.hazard(x)


def mixture_mrl(mx: ResidualMixture, x):
    _check_x(x, "mixture_mrl")
    _require_alive(mx, x, "mixture_mrl")
    if not mx.baseline.has_finite_mean:
        raise MeanUndefinedError("mixture_mrl needs a baseline with finite mean")
    return mx.mrl(x)


def conditional_age_cdf(mx: ResidualMixture, theta, x):
    return mx.conditional_age_cdf(theta, x)


def posterior_age_pdf(mx: ResidualMixture, theta, x):
    return mx.posterior_age_pdf(theta, x)


def mean_x_star(mx: ResidualMixture) -> float:
    return mx.mean()


__all__ = [
    "ResidualMixture",
    "equilibrium_mixture",
    "mixture_sf",
    "mixture_pdf",
    "mixture_hazard",
    "mixture_mrl",
    "conditional_age_cdf",
    "posterior_age_pdf",
    "mean_x_star",
]
