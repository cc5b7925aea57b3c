"""Baseline lifetime distributions.

All evaluation methods are vectorised over ``x`` and work in log space
where the closed form allows it, because the mixture integrands divide
survival values that underflow long before their ratio does.
"""

from __future__ import annotations

import csv
import enum
import math
from pathlib import Path

import numpy as np
from scipy import special

from .numerics import DEFAULT_TOL, integrate_semi_infinite, tail_integrals

_QUANTILE_XTOL = 1e-12


class DomainError(ValueError):
    """A quantity was requested where it is not defined."""


class MeanUndefinedError(DomainError):
    pass


class Quantity(enum.Enum):
    SF = "sf"
    CDF = "cdf"
    PDF = "pdf"
    HAZARD = "hazard"
    REVERSED_HAZARD = "reversed_hazard"
    MRL = "mrl"
    INTEGRATED_SF = "integrated_sf"


def _arr(x):
    return np.asarray(x, dtype=float)


def _out(like, values):
    values = np.asarray(values, dtype=float)
    return float(values) if np.ndim(like) == 0 else values


def _safe_exp_diff(a, b):
    """exp(a - b) with -inf - -inf read as 0."""
    with np.errstate(invalid="ignore"):
        d = a - b
    return np.exp(np.where(np.isnan(d), -np.inf, d))


class LifetimeDistribution:
    """Nonnegative lifetime with survival function, density and derived measures.

    Subclasses provide ``logsf`` and ``pdf`` (or ``logpdf``); everything else
    has a generic fallback built on quadrature or bisection that families
    override with closed forms.
    """

    closed_form_pdf = True

    def logsf(self, x):
        raise NotImplementedError

    def sf(self, x):
        return _out(x, np.exp(self.logsf(_arr(x))))

    def cdf(self, x):
        return _out(x, -np.expm1(self.logsf(_arr(x))))

    def pdf(self, x):
        return _out(x, np.exp(self.logpdf(_arr(x))))

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.pdf(_arr(x))))

    def hazard(self, x):
        x = _arr(x)
        return _out(x, _safe_exp_diff(self.logpdf(x), self.logsf(x)))

    def cumulative_hazard(self, x):
        return _out(x, -self.logsf(_arr(x)))

    def reversed_hazard(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _out(x, self.pdf(x) / self.cdf(x))

    def integrated_sf(self, x):
        """``int_x^inf sf(u) du``."""
        x = _arr(x)
        if not self.has_finite_mean:
            return _out(x, np.full(x.shape, np.inf))
        return _out(x, tail_integrals(lambda u: self.sf(u), x, DEFAULT_TOL))

    def log_integrated_sf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.integrated_sf(_arr(x))))

    def mrl(self, x):
        x = _arr(x)
        return _out(x, _safe_exp_diff(self.log_integrated_sf(x), self.logsf(x)))

    @property
    def has_finite_mean(self) -> bool:
        return True

    def mean(self) -> float:
        if not self.has_finite_mean:
            raise MeanUndefinedError(f"mean does not exist for {self!r}")
        return float(
            integrate_semi_infinite(lambda u: self.sf(u), DEFAULT_TOL, atol=0.0).value
        )

    def isf(self, p):
        """Smallest ``x`` with ``sf(x) <= p``.

        Bisection on the bracket, accelerated by Newton steps on ``log sf``
        whenever a density is available; steps leaving the bracket fall back
        to the midpoint.
        """
        p = _arr(p)
        flat = p.ravel()
        target = np.log(np.clip(flat, 1e-300, 1.0))
        lo = np.zeros_like(flat)
        hi = np.ones_like(flat)
        for _ in range(2000):
            short = self.logsf(hi) > target
            if not short.any():
                break
            hi = np.where(short, 2.0 * hi, hi)
        x = 0.5 * (lo + hi)
        newton = self.closed_form_pdf
        for _ in range(400):
            if np.all(hi - lo <= _QUANTILE_XTOL * np.maximum(1.0, hi)):
                break
            gap = np.asarray(self.logsf(x), dtype=float) - target
            lo = np.where(gap > 0, x, lo)
            hi = np.where(gap > 0, hi, x)
            nxt = 0.5 * (lo + hi)
            if newton:
                with np.errstate(all="ignore"):
                    step = x + gap / np.asarray(self.hazard(x), dtype=float)
                inside = np.isfinite(step) & (step > lo) & (step < hi)
                nxt = np.where(inside, step, nxt)
                done = np.abs(step - x) <= _QUANTILE_XTOL * np.maximum(1.0, np.abs(x))
                lo = np.where(done & inside, np.minimum(step, x), lo)
                hi = np.where(done & inside, np.maximum(step, x), hi)
            x = nxt
        res = np.where(flat >= 1.0, 0.0, x)
        res = np.where(flat <= 0.0, np.inf, res)
        return _out(p, res.reshape(p.shape))

    def quantile(self, q):
        return self.isf(1.0 - _arr(q))

    def rvs(self, size, rng: np.random.Generator):
        # 1 - U lies in (0, 1], keeping isf finite
        u = 1.0 - rng.random(size)
        return np.asarray(self.isf(u), dtype=float)

    def sample(self, count: int, seed: int) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be >= 1")
        return self.rvs(count, np.random.default_rng(seed))


class Exponential(LifetimeDistribution):
    def __init__(self, rate=1.0):
        if not rate > 0:
            raise ValueError("rate must be positive")
        self.rate = float(rate)

    def __repr__(self):
        return f"Exponential(rate={self.rate:g})"

    def logsf(self, x):
        return _out(x, -self.rate * _arr(x))

    def logpdf(self, x):
        return _out(x, math.log(self.rate) - self.rate * _arr(x))

    def pdf(self, x):
        return _out(x, self.rate * np.exp(-self.rate * _arr(x)))

    def hazard(self, x):
        return _out(x, np.full(np.shape(x), self.rate))

    def reversed_hazard(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore"):
            return _out(x, self.rate / np.expm1(self.rate * x))

    def integrated_sf(self, x):
        return _out(x, np.exp(-self.rate * _arr(x)) / self.rate)

    def log_integrated_sf(self, x):
        return _out(x, -self.rate * _arr(x) - math.log(self.rate))

    def mrl(self, x):
        return _out(x, np.full(np.shape(x), 1.0 / self.rate))

    def mean(self):
        return 1.0 / self.rate

    def isf(self, p):
        p = _arr(p)
        with np.errstate(divide="ignore"):
            return _out(p, -np.log(p) / self.rate)


def _log_upper_gamma(a, z):
    """log of the (unregularised) upper incomplete gamma function."""
    z = _arr(z)
    with np.errstate(divide="ignore"):
        direct = np.log(special.gammaincc(a, z)) + special.gammaln(a)
    big = z > 300.0
    if np.any(big):
        zb = np.where(big, z, 1.0)
        # asymptotic series: Gamma(a,z) ~ z^(a-1) e^-z sum_k (a-1)...(a-k)/z^k
        term = np.ones_like(zb)
        total = np.ones_like(zb)
        for k in range(1, 30):
            term = term * (a - k) / zb
            total = total + term
        with np.errstate(invalid="ignore"):
            asym = (a - 1.0) * np.log(zb) - zb + np.log(total)
        direct = np.where(big, asym, direct)
    return direct


class Weibull(LifetimeDistribution):
    """Weibull with survival ``exp(-(x/scale)**shape)``."""

    def __init__(self, shape, scale=1.0):
        if not (shape > 0 and scale > 0):
            raise ValueError("shape and scale must be positive")
        self.shape = float(shape)
        self.scale = float(scale)

    def __repr__(self):
        return f"Weibull(shape={self.shape:g}, scale={self.scale:g})"

    def logsf(self, x):
        return _out(x, -((_arr(x) / self.scale) ** self.shape))

    def logpdf(self, x):
        x = _arr(x)
        k, s = self.shape, self.scale
        with np.errstate(divide="ignore"):
            return _out(x, math.log(k / s) + (k - 1.0) * np.log(x / s) - (x / s) ** k)

    def hazard(self, x):
        x = _arr(x)
        k, s = self.shape, self.scale
        with np.errstate(divide="ignore"):
            return _out(x, (k / s) * (x / s) ** (k - 1.0))

    def log_integrated_sf(self, x):
        a = 1.0 / self.shape
        z = (_arr(x) / self.scale) ** self.shape
        return _out(x, math.log(self.scale / self.shape) + _log_upper_gamma(a, z))

    def integrated_sf(self, x):
        return _out(x, np.exp(self.log_integrated_sf(_arr(x))))

    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    def isf(self, p):
        p = _arr(p)
        with np.errstate(divide="ignore"):
            return _out(p, self.scale * (-np.log(p)) ** (1.0 / self.shape))


class HyperExponential(LifetimeDistribution):
    """Finite mixture of exponentials, ``sf(x) = sum p_i exp(-rate_i x)``."""

    def __init__(self, weights, rates):
        w = np.asarray(weights, dtype=float)
        r = np.asarray(rates, dtype=float)
        if w.shape != r.shape or w.ndim != 1 or w.size == 0:
            raise ValueError("weights and rates must be 1-d and of equal length")
        if np.any(w <= 0) or np.any(r <= 0):
            raise ValueError("weights and rates must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {float(w.sum())!r}")
        self.weights = w
        self.rates = r
        self._logw = np.log(w)

    def __repr__(self):
        parts = ", ".join(f"{p:g}:{r:g}" for p, r in zip(self.weights, self.rates))
        return f"HyperExponential({parts})"

    def _lse(self, logcoef, x):
        # factor out the slowest rate so every remaining exponential is <= 1
        x = _arr(x)
        flat = x.ravel()
        slow = self.rates.min()
        terms = np.exp(logcoef[:, None] - (self.rates - slow)[:, None] * flat[None, :])
        return (np.log(terms.sum(axis=0)) - slow * flat).reshape(x.shape)

    def logsf(self, x):
        return _out(x, self._lse(self._logw, x))

    def logpdf(self, x):
        return _out(x, self._lse(self._logw + np.log(self.rates), x))

    def log_integrated_sf(self, x):
        return _out(x, self._lse(self._logw - np.log(self.rates), x))

    def integrated_sf(self, x):
        return _out(x, np.exp(self.log_integrated_sf(x)))

    def mean(self):
        return float(np.sum(self.weights / self.rates))


class LogLogistic(LifetimeDistribution):
    """Log-logistic with survival ``1 / (1 + (x/scale)**shape)``."""

    def __init__(self, shape, scale=1.0):
        if not (shape > 0 and scale > 0):
            raise ValueError("shape and scale must be positive")
        self.shape = float(shape)
        self.scale = float(scale)

    def __repr__(self):
        return f"LogLogistic(shape={self.shape:g}, scale={self.scale:g})"

    def logsf(self, x):
        return _out(x, -np.log1p((_arr(x) / self.scale) ** self.shape))

    def pdf(self, x):
        x = _arr(x)
        b, a = self.shape, self.scale
        z = (x / a) ** b
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (b / a) * (x / a) ** (b - 1.0) / (1.0 + z) ** 2
        return _out(x, dens)

    def hazard(self, x):
        x = _arr(x)
        b, a = self.shape, self.scale
        with np.errstate(divide="ignore"):
            return _out(x, (b / a) * (x / a) ** (b - 1.0) / (1.0 + (x / a) ** b))

    @property
    def has_finite_mean(self):
        return self.shape > 1.0

    def integrated_sf(self, x):
        if not self.has_finite_mean:
            return super().integrated_sf(x)
        x = _arr(x)
        b, a = self.shape, self.scale
        s = 1.0 / b
        w = (x / a) ** b
        val = a * s * special.beta(1.0 - s, s) * special.betainc(1.0 - s, s, 1.0 / (1.0 + w))
        return _out(x, val)

    def mean(self):
        if not self.has_finite_mean:
            raise MeanUndefinedError(f"mean does not exist for {self!r}")
        b = self.shape
        return self.scale * (math.pi / b) / math.sin(math.pi / b)

    def isf(self, p):
        p = _arr(p)
        with np.errstate(divide="ignore"):
            return _out(p, self.scale * ((1.0 - p) / p) ** (1.0 / self.shape))


class HalfCauchy(LifetimeDistribution):
    """Density ``2 / (pi (1 + x**2))`` on ``[0, inf)``; the mean is infinite."""

    def __repr__(self):
        return "HalfCauchy()"

    def sf(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore"):
            return _out(x, (2.0 / math.pi) * np.arctan2(1.0, x))

    def logsf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.sf(_arr(x))))

    def cdf(self, x):
        return _out(x, (2.0 / math.pi) * np.arctan(_arr(x)))

    def pdf(self, x):
        return _out(x, 2.0 / (math.pi * (1.0 + _arr(x) ** 2)))

    @property
    def has_finite_mean(self):
        return False

    def isf(self, p):
        p = _arr(p)
        with np.errstate(divide="ignore"):
            return _out(p, 1.0 / np.tan(0.5 * math.pi * p))


class HalfCauchySquared(LifetimeDistribution):
    """Density ``4 / (pi (1 + x**2)**2)`` on ``[0, inf)``."""

    def __repr__(self):
        return "HalfCauchySquared()"

    def sf(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore"):
            direct = (2.0 / math.pi) * (np.arctan2(1.0, x) - x / (1.0 + x * x))
            xb = np.where(x > 100.0, x, 100.0)
            inv2 = 1.0 / (xb * xb)
            series = (2.0 / math.pi) / xb**3 * (2.0 / 3.0 - inv2 * (4.0 / 5.0 - inv2 * (6.0 / 7.0 - inv2 * 8.0 / 9.0)))
        return _out(x, np.where(x > 100.0, series, direct))

    def logsf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.sf(_arr(x))))

    def cdf(self, x):
        x = _arr(x)
        return _out(x, (2.0 / math.pi) * (np.arctan(x) + x / (1.0 + x * x)))

    def pdf(self, x):
        return _out(x, 4.0 / (math.pi * (1.0 + _arr(x) ** 2) ** 2))

    def mean(self):
        return 2.0 / math.pi


class HazardDefined(LifetimeDistribution):
    """Distribution given by its cumulative hazard and hazard functions."""

    def __init__(self, cumulative_hazard, hazard, name="HazardDefined"):
        self._cumhaz = cumulative_hazard
        self._haz = hazard
        self.name = name

    def __repr__(self):
        return self.name

    def logsf(self, x):
        return _out(x, -np.asarray(self._cumhaz(_arr(x)), dtype=float))

    def hazard(self, x):
        return _out(x, np.asarray(self._haz(_arr(x)), dtype=float))

    def logpdf(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.hazard(x)) + self.logsf(x))


class Tabulated(LifetimeDistribution):
    """Survival function given at knots, log-linear in between.

    Past the last knot the last segment's hazard is continued.  A flat last
    segment therefore leaves a survival plateau and an infinite mean.
    """

    def __init__(self, xs, sfs, name=None):
        xs = np.asarray(xs, dtype=float)
        sfs = np.asarray(sfs, dtype=float)
        if xs.ndim != 1 or xs.shape != sfs.shape or xs.size < 2:
            raise ValueError("need matching 1-d knot arrays with at least two rows")
        if xs[0] != 0.0 or sfs[0] != 1.0:
            raise ValueError("first knot must be (0, 1)")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("x must be strictly increasing")
        if np.any(np.diff(sfs) > 0):
            raise ValueError("sf must be nonincreasing")
        if np.any(sfs <= 0):
            raise ValueError("sf must stay positive at every knot")
        self.xs = xs
        self.sfs = sfs
        self.name = name
        self._logs = np.log(sfs)
        self._haz = -np.diff(self._logs) / np.diff(xs)
        seg = np.diff(xs)
        h = self._haz
        with np.errstate(divide="ignore", invalid="ignore"):
            seg_int = np.where(h > 0, sfs[:-1] * -np.expm1(-h * seg) / h, sfs[:-1] * seg)
        last_h = h[-1]
        tail = sfs[-1] / last_h if last_h > 0 else np.inf
        # integral from knot i to infinity
        self._from_knot = np.concatenate([np.cumsum(seg_int[::-1])[::-1], [0.0]]) + tail

    @classmethod
    def from_csv(cls, path):
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["x", "sf"]:
                raise ValueError(f"{path}: header must be 'x,sf'")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                if len(row) != 2:
                    raise ValueError(f"{path}:{lineno}: expected two columns")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
        if not rows:
            raise ValueError(f"{path}: no data rows")
        xs, sfs = zip(*rows)
        return cls(xs, sfs, name=str(path))

    def __repr__(self):
        return f"Tabulated({self.name or f'{self.xs.size} knots'})"

    def _segment(self, x):
        return np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, self.xs.size - 2)

    def logsf(self, x):
        x = _arr(x)
        i = self._segment(x)
        return _out(x, self._logs[i] - self._haz[i] * (x - self.xs[i]))

    def hazard(self, x):
        x = _arr(x)
        return _out(x, self._haz[self._segment(x)])

    def logpdf(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.hazard(x)) + self.logsf(x))

    @property
    def has_finite_mean(self):
        return self._haz[-1] > 0

    def integrated_sf(self, x):
        x = _arr(x)
        i = self._segment(x)
        h = self._haz[i]
        s = np.exp(self.logsf(x))
        beyond = x >= self.xs[-1]
        span = np.where(beyond, 0.0, self.xs[i + 1] - x)
        with np.errstate(divide="ignore", invalid="ignore"):
            part = np.where(h > 0, s * -np.expm1(-h * span) / h, s * span)
            last_h = self._haz[-1]
            tail_beyond = s / last_h if last_h > 0 else np.full(x.shape, np.inf)
        val = np.where(beyond, tail_beyond, part + self._from_knot[i + 1])
        return _out(x, val)

    def mean(self):
        if not self.has_finite_mean:
            raise MeanUndefinedError(f"mean does not exist for {self!r}")
        return float(self._from_knot[0])


class Empirical(LifetimeDistribution):
    """Right-continuous empirical survival function of a sample."""

    closed_form_pdf = False

    def __init__(self, sample):
        s = np.sort(np.asarray(sample, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("empty sample")
        if s[0] < 0:
            raise ValueError("lifetimes must be nonnegative")
        self.data = s
        # suffix sums for tail integrals
        self._suffix = np.concatenate([np.cumsum(s[::-1])[::-1], [0.0]])

    def __repr__(self):
        return f"Empirical(n={self.data.size})"

    def sf(self, x):
        x = _arr(x)
        n = self.data.size
        return _out(x, (n - np.searchsorted(self.data, x, side="right")) / n)

    def logsf(self, x):
        with np.errstate(divide="ignore"):
            return _out(x, np.log(self.sf(_arr(x))))

    def pdf(self, x):
        raise DomainError("pdf is undefined for an empirical distribution")

    logpdf = pdf
    hazard = pdf
    reversed_hazard = pdf

    def integrated_sf(self, x):
        x = _arr(x)
        n = self.data.size
        j = np.searchsorted(self.data, x, side="right")
        return _out(x, (self._suffix[j] - (n - j) * x) / n)

    def mrl(self, x):
        x = _arr(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _out(x, self.integrated_sf(x) / self.sf(x))

    def mean(self):
        return float(self.data.mean())

    def isf(self, p):
        p = _arr(p)
        n = self.data.size
        # smallest data point whose right-continuous sf is <= p
        idx = np.clip(np.ceil(n * (1.0 - p)).astype(int) - 1, 0, n - 1)
        return _out(p, self.data[idx])


class Equilibrium(LifetimeDistribution):
    """Stationary-renewal age distribution with density ``sf(x) / E(X)``."""

    def __init__(self, base: LifetimeDistribution):
        if not base.has_finite_mean:
            raise MeanUndefinedError(f"equilibrium distribution needs a finite mean; {base!r} has none")
        self.base = base
        self._mean = base.mean()
        self._logmean = math.log(self._mean)

    def __repr__(self):
        return f"Equilibrium({self.base!r})"

    def logsf(self, x):
        return _out(x, self.base.log_integrated_sf(_arr(x)) - self._logmean)

    def logpdf(self, x):
        return _out(x, self.base.logsf(_arr(x)) - self._logmean)

    def hazard(self, x):
        x = _arr(x)
        return _out(x, _safe_exp_diff(self.base.logsf(x), self.base.log_integrated_sf(x)))


class ResidualAtAge(LifetimeDistribution):
    """Residual life ``(X - age | X > age)``."""

    def __init__(self, base: LifetimeDistribution, age: float):
        self.base = base
        self.age = float(age)
        self._logsf_age = float(base.logsf(self.age))
        self.closed_form_pdf = base.closed_form_pdf

    def __repr__(self):
        return f"ResidualAtAge({self.base!r}, {self.age:g})"

    def logsf(self, x):
        return _out(x, self.base.logsf(_arr(x) + self.age) - self._logsf_age)

    def logpdf(self, x):
        return _out(x, self.base.logpdf(_arr(x) + self.age) - self._logsf_age)

    def hazard(self, x):
        return _out(x, self.base.hazard(_arr(x) + self.age))

    def log_integrated_sf(self, x):
        return _out(x, self.base.log_integrated_sf(_arr(x) + self.age) - self._logsf_age)

    def integrated_sf(self, x):
        return _out(x, np.exp(self.log_integrated_sf(_arr(x))))

    def mrl(self, x):
        return _out(x, self.base.mrl(_arr(x) + self.age))

    @property
    def has_finite_mean(self):
        return self.base.has_finite_mean


def equilibrium(dist: LifetimeDistribution) -> LifetimeDistribution:
    if isinstance(dist, Exponential):
        return Exponential(dist.rate)
    return Equilibrium(dist)


def residual_at_age(dist: LifetimeDistribution, age: float) -> LifetimeDistribution:
    if age < 0:
        raise DomainError(f"age must be nonnegative, got {age}")
    if not np.isfinite(dist.logsf(age)):
        raise DomainError(f"sf({age}) = 0: no survivors at that age")
    if age == 0:
        return dist
    if isinstance(dist, Exponential):
        return Exponential(dist.rate)
    return ResidualAtAge(dist, age)


def evaluate(dist: LifetimeDistribution, q: Quantity, x):
    """Evaluate one quantity with domain checks."""
    q = Quantity(q)
    xa = _arr(x)
    if np.any(xa < 0) or np.any(np.isnan(xa)):
        raise DomainError(f"{q.value}: x must be >= 0")
    if q in (Quantity.HAZARD, Quantity.MRL):
        if np.any(~np.isfinite(dist.logsf(xa))):
            raise DomainError(f"{q.value}: sf(x) = 0 at some requested x")
    if q is Quantity.REVERSED_HAZARD and np.any(np.asarray(dist.cdf(xa)) <= 0):
        raise DomainError(f"{q.value}: cdf(x) = 0 at some requested x")
    fn = getattr(dist, q.value)
    return fn(x)


def mean(dist: LifetimeDistribution) -> float:
    return dist.mean()


def sample(dist: LifetimeDistribution, count: int, seed: int) -> np.ndarray:
    return dist.sample(count, seed)
