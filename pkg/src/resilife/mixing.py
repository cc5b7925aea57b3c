"""Distributions of the random age.

Discrete variants integrate exactly by summation; continuous variants
(including order statistics of a baseline) integrate by semi-infinite
quadrature against their density.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .distributions import (
    DomainError,
    HalfCauchy,
    HalfCauchySquared,
    LifetimeDistribution,
    _arr,
    _out,
)
from .numerics import DEFAULT_TOL, integrate_semi_infinite

# floor for the absolute tolerance in relative-accuracy integrals
TINY = 1e-300


class MixingDistribution:
    is_discrete = False

    def expect(self, g, tol: float = DEFAULT_TOL, atol=None):
        """``E[g(Theta)]`` for a vectorised ``g``; ``atol`` defaults to ``tol``."""
        raise NotImplementedError

    def expect_exp(self, log_g, tol: float = DEFAULT_TOL):
        """``E[exp(log_g(Theta))]`` componentwise, to relative accuracy ``tol``.

        ``log_g`` maps an array of ages of shape ``(n,)`` to ``(m, n)``.
        """
        raise NotImplementedError

    def upper_quantile(self, p: float) -> float:
        """Smallest age whose survival probability is at most ``p``."""
        raise NotImplementedError


class DiscreteAtoms(MixingDistribution):
    is_discrete = True

    def __init__(self, atoms, weights):
        t = np.asarray(atoms, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if t.shape != w.shape or t.size == 0:
            raise ValueError("atoms and weights must be nonempty and of equal length")
        if np.any(t < 0):
            raise ValueError("atoms must be nonnegative")
        if np.any(np.diff(t) <= 0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {float(w.sum())!r}")
        self.atoms = t
        self.weights = w

    def __repr__(self):
        parts = ", ".join(f"{t:g}:{p:g}" for t, p in zip(self.atoms, self.weights))
        return f"DiscreteAtoms({parts})"

    def expect(self, g, tol=DEFAULT_TOL, atol=None):
        vals = np.asarray(g(self.atoms), dtype=float)
        return _squeeze(vals @ self.weights)

    def expect_exp(self, log_g, tol=DEFAULT_TOL):
        vals = np.atleast_2d(np.asarray(log_g(self.atoms), dtype=float))
        return np.exp(vals) @ self.weights

    def cdf(self, theta):
        theta = _arr(theta)
        c = np.concatenate([[0.0], np.cumsum(self.weights)])
        return _out(theta, np.minimum(c[np.searchsorted(self.atoms, theta, side="right")], 1.0))

    def sf(self, theta):
        theta = _arr(theta)
        tail = np.concatenate([np.cumsum(self.weights[::-1])[::-1], [0.0]])
        return _out(theta, tail[np.searchsorted(self.atoms, theta, side="right")])

    def mean(self):
        return float(self.atoms @ self.weights)

    has_finite_mean = True

    def upper_quantile(self, p):
        return float(self.atoms[-1])


class Degenerate(DiscreteAtoms):
    def __init__(self, theta):
        super().__init__([theta], [1.0])
        self.theta = float(theta)

    def __repr__(self):
        return f"Degenerate({self.theta:g})"


class Continuous(MixingDistribution):
    """Age with a density, given by any lifetime distribution.

    Acts as a distribution itself, so it can sit on either side of an
    order check.
    """

    def __init__(self, dist: LifetimeDistribution, label=None):
        self.dist = dist
        self.label = label
        median = float(dist.isf(0.5))
        self._scale = median if np.isfinite(median) and median > 0 else 1.0

    def __repr__(self):
        return self.label or f"Continuous({self.dist!r})"

    def expect(self, g, tol=DEFAULT_TOL, atol=None):
        def integrand(t):
            return np.asarray(g(t), dtype=float) * self.dist.pdf(t)

        return integrate_semi_infinite(integrand, tol, atol=atol, scale=self._scale).value

    def expect_exp(self, log_g, tol=DEFAULT_TOL):
        def integrand(t):
            lg = np.atleast_2d(np.asarray(log_g(t), dtype=float))
            lh = np.asarray(self.dist.logpdf(t), dtype=float)
            with np.errstate(invalid="ignore"):
                total = lg + lh[None, :]
            return np.exp(np.where(np.isnan(total), -np.inf, total))

        res = integrate_semi_infinite(integrand, tol, atol=TINY, scale=self._scale)
        return np.atleast_1d(res.value)

    def upper_quantile(self, p):
        return float(self.dist.isf(p))

    # distribution-like surface, delegated
    def sf(self, x):
        return self.dist.sf(x)

    def logsf(self, x):
        return self.dist.logsf(x)

    def cdf(self, x):
        return self.dist.cdf(x)

    def pdf(self, x):
        return self.dist.pdf(x)

    def logpdf(self, x):
        return self.dist.logpdf(x)

    def hazard(self, x):
        return self.dist.hazard(x)

    def cumulative_hazard(self, x):
        return self.dist.cumulative_hazard(x)

    def reversed_hazard(self, x):
        return self.dist.reversed_hazard(x)

    def mrl(self, x):
        return self.dist.mrl(x)

    def integrated_sf(self, x):
        return self.dist.integrated_sf(x)

    def log_integrated_sf(self, x):
        return self.dist.log_integrated_sf(x)

    def mean(self):
        return self.dist.mean()

    @property
    def has_finite_mean(self):
        return self.dist.has_finite_mean

    @property
    def closed_form_pdf(self):
        return self.dist.closed_form_pdf


def _log_binom(n, j):
    return special.gammaln(n + 1.0) - special.gammaln(j + 1.0) - special.gammaln(n - j + 1.0)


def _os_log_terms(base, n, js, t):
    t = _arr(t).ravel()
    log_sf = np.asarray(base.logsf(t), dtype=float)
    with np.errstate(divide="ignore"):
        log_cdf = np.log(-np.expm1(log_sf))
    j = np.asarray(js, dtype=float)[:, None]
    with np.errstate(invalid="ignore"):
        a = np.where(j == 0, 0.0, j * log_cdf[None, :])
        b = np.where(n - j == 0, 0.0, (n - j) * log_sf[None, :])
    return _log_binom(n, j) + a + b


def _check_kn(k, n):
    if not (isinstance(k, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise TypeError("k and n must be integers")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")


def os_cdf(base: LifetimeDistribution, k: int, n: int, t):
    """cdf of the k-th smallest of n i.i.d. draws from ``base``."""
    _check_kn(k, n)
    terms = _os_log_terms(base, n, np.arange(k, n + 1), t)
    val = np.exp(special.logsumexp(terms, axis=0))
    return _out(t, np.minimum(val, 1.0).reshape(np.shape(t)))


def os_sf(base, k, n, t):
    _check_kn(k, n)
    terms = _os_log_terms(base, n, np.arange(0, k), t)
    val = np.exp(special.logsumexp(terms, axis=0))
    return _out(t, np.minimum(val, 1.0).reshape(np.shape(t)))


def os_logpdf(base, k, n, t):
    _check_kn(k, n)
    ta = _arr(t)
    log_sf = np.asarray(base.logsf(ta), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_cdf = np.log(-np.expm1(log_sf))
        a = log_cdf * (k - 1) if k > 1 else 0.0
        b = log_sf * (n - k) if n > k else 0.0
    const = special.gammaln(n + 1.0) - special.gammaln(k) - special.gammaln(n - k + 1.0)
    return _out(t, const + a + b + np.asarray(base.logpdf(ta), dtype=float))


def os_pdf(base: LifetimeDistribution, k: int, n: int, t):
    """Density ``n!/((k-1)!(n-k)!) F^(k-1) sf^(n-k) f`` of the k-th order statistic."""
    return _out(t, np.exp(os_logpdf(base, k, n, t)))


class OrderStatisticDistribution(LifetimeDistribution):
    def __init__(self, base: LifetimeDistribution, k: int, n: int):
        _check_kn(k, n)
        self.base, self.k, self.n = base, int(k), int(n)

    def __repr__(self):
        return f"OrderStatistic({self.base!r}, {self.k}, {self.n})"

    def logsf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(os_sf(self.base, self.k, self.n, _arr(x))))

    def sf(self, x):
        return os_sf(self.base, self.k, self.n, x)

    def cdf(self, x):
        return os_cdf(self.base, self.k, self.n, x)

    def logpdf(self, x):
        return os_logpdf(self.base, self.k, self.n, x)

    @property
    def has_finite_mean(self):
        return self.base.has_finite_mean or self.k < self.n

    def isf(self, p):
        p = _arr(p)
        # sf of X_{k:n} equals q exactly when the base sf equals I^-1(n-k+1, k; q)
        base_p = special.betaincinv(self.n - self.k + 1, self.k, p)
        return _out(p, self.base.isf(base_p))


class OrderStatistic(Continuous):
    def __init__(self, base: LifetimeDistribution, k: int, n: int):
        super().__init__(OrderStatisticDistribution(base, k, n))
        self.base, self.k, self.n = base, int(k), int(n)

    def __repr__(self):
        return f"OrderStatistic({self.base!r}, k={self.k}, n={self.n})"


def ce61_h1() -> Continuous:
    """Age density ``4 / (pi (1 + t**2)**2)``."""
    return Continuous(HalfCauchySquared(), label="ce61_h1")


def ce61_h2() -> Continuous:
    """Age density ``2 / (pi (1 + t**2))``."""
    return Continuous(HalfCauchy(), label="ce61_h2")


def expect(m: MixingDistribution, g, tol: float = DEFAULT_TOL):
    return m.expect(g, tol)


def _squeeze(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def require_density(m: MixingDistribution, what: str):
    if m.is_discrete:
        raise DomainError(f"{what} needs a mixing density; {m!r} is discrete (use atom masses)")


__all__ = [
    "MixingDistribution",
    "DiscreteAtoms",
    "Degenerate",
    "Continuous",
    "OrderStatistic",
    "OrderStatisticDistribution",
    "os_cdf",
    "os_sf",
    "os_pdf",
    "os_logpdf",
    "ce61_h1",
    "ce61_h2",
    "expect",
]
