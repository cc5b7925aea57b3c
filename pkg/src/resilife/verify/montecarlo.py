"""Simulation of order-statistic residuals and the statistics used to judge them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import stats

from ..distributions import LifetimeDistribution
from ..specs import parse_distribution

MIN_REPLICATIONS = 1_000
MIN_INDEPENDENCE_PAIRS = 10_000
INDEPENDENCE_LEVEL = 0.01


def ks_threshold(count: int, slack: float = 1.5) -> float:
    """Asymptotic 95% KS critical value, widened by ``slack``."""
    return 1.36 / np.sqrt(count) * slack


def _baseline(spec) -> LifetimeDistribution:
    return parse_distribution(spec) if isinstance(spec, str) else spec


def _draw(baseline, n, count, seed):
    if count < MIN_REPLICATIONS:
        raise ValueError(f"need at least {MIN_REPLICATIONS} replications, got {count}")
    rng = np.random.default_rng(seed)
    lifetimes = _baseline(baseline).rvs((count, n), rng)
    lifetimes.sort(axis=1)
    return lifetimes, rng


def mc_spacings(baseline, n: int, count: int, seed: int):
    """Second-largest order statistic and last spacing, one pair per replication.

    >>> from resilife.distributions import Exponential
    >>> theta, s = mc_spacings(Exponential(1.0), 5, 1000, 1)
    >>> bool((s >= 0).all())
    True
    """
    if n < 2:
        raise ValueError("need n >= 2 for a last spacing")
    lifetimes, _ = _draw(baseline, n, count, seed)
    theta = lifetimes[:, -2]
    return theta, lifetimes[:, -1] - theta


@dataclass(frozen=True)
class McConfig:
    baseline: Union[str, LifetimeDistribution]
    n: int
    k: int
    count: int
    seed: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.count < MIN_REPLICATIONS:
            raise ValueError(f"need at least {MIN_REPLICATIONS} replications, got {self.count}")


def mc_k_out_n_residuals(cfg: McConfig) -> np.ndarray:
    """Residual life of one surviving component, picked at random, after the k-th failure."""
    if cfg.k >= cfg.n:
        raise ValueError("need k < n so that a component survives")
    lifetimes, rng = _draw(cfg.baseline, cfg.n, cfg.count, cfg.seed)
    rows = np.arange(cfg.count)
    pick = cfg.k + rng.integers(0, cfg.n - cfg.k, size=cfg.count)
    return lifetimes[rows, pick] - lifetimes[:, cfg.k - 1]


def ks_statistic(samples, sf) -> float:
    """Largest gap between the empirical sf of ``samples`` and ``sf``.

    >>> ks_statistic([1.0], lambda x: 0.5)
    0.5
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("need at least one sample")
    n = x.size
    target = np.asarray(sf(x), dtype=float)
    after = (n - np.arange(1, n + 1)) / n
    before = after + 1.0 / n
    return float(max(np.max(np.abs(after - target)), np.max(np.abs(before - target))))


def ks_two_sample(a, b) -> float:
    return float(stats.ks_2samp(a, b).statistic)


@dataclass(frozen=True)
class IndependenceResult:
    statistic: float
    p_value: float
    dof: int
    rejected: bool
    level: float = INDEPENDENCE_LEVEL

    def to_dict(self):
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "dof": self.dof,
            "rejected": self.rejected,
            "level": self.level,
        }


def _quantile_bins(values, bins):
    edges = np.quantile(values, np.linspace(0.0, 1.0, bins + 1)[1:-1])
    if np.unique(edges).size < bins - 1:
        raise ValueError("marginal too degenerate for a quantile partition")
    return np.searchsorted(edges, values, side="right")


def independence_check(pairs, bins: int = 10, level: float = INDEPENDENCE_LEVEL) -> IndependenceResult:
    """Chi-square test of independence on a ``bins x bins`` quantile partition.

    ``pairs`` is either an ``(N, 2)`` array or a tuple of two length-N arrays.
    """
    if isinstance(pairs, tuple):
        a, b = (np.asarray(v, dtype=float).ravel() for v in pairs)
    else:
        arr = np.asarray(pairs, dtype=float)
        a, b = arr[:, 0], arr[:, 1]
    if a.size != b.size:
        raise ValueError("pair components differ in length")
    if a.size < MIN_INDEPENDENCE_PAIRS:
        raise ValueError(f"need at least {MIN_INDEPENDENCE_PAIRS} pairs, got {a.size}")
    table = np.zeros((bins, bins))
    np.add.at(table, (_quantile_bins(a, bins), _quantile_bins(b, bins)), 1.0)
    res = stats.chi2_contingency(table, correction=False)
    return IndependenceResult(float(res.statistic), float(res.pvalue), int(res.dof), bool(res.pvalue < level), level)


__all__ = [
    "McConfig",
    "IndependenceResult",
    "mc_spacings",
    "mc_k_out_n_residuals",
    "ks_statistic",
    "ks_two_sample",
    "ks_threshold",
    "independence_check",
]
