"""Quadrature, evaluation grids and monotonicity checks.

Every model quantity in the package reduces to an integral over the age
variable, and every universally quantified claim is checked on a grid.
The integrators here are vectorised: an integrand may return one row of
values per abscissa *or* a ``(m, n)`` block, in which case ``m`` integrals
are refined together and each must meet the tolerance on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_MONOTONE_TOL = 1e-7
EVALUATION_BUDGET = 100_000

_GL_ORDER = 10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_INITIAL_PANELS = 16


class QuadratureError(RuntimeError):
    """Raised when an integral does not converge inside the evaluation budget.

    The best estimate so far is kept on ``partial`` so callers can report it.
    """

    def __init__(self, message, partial=None, error_estimate=None, evaluations=0):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class IntegrandError(ArithmeticError):
    """The integrand produced NaN at some abscissa."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float | np.ndarray
    error_estimate: float | np.ndarray
    evaluations: int


@dataclass(frozen=True)
class Grid:
    """Evaluation grid on ``[lo, hi]``.

    >>> Grid(0.0, 2.0, 5).values()
    array([0. , 0.5, 1. , 1.5, 2. ])
    """

    lo: float
    hi: float
    points: int
    spacing: str = "uniform"
    _cache: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.lo >= 0 and self.hi > self.lo):
            raise ValueError(f"grid needs 0 <= lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 3:
            raise ValueError("grid needs at least 3 points")
        if self.spacing not in ("uniform", "geometric"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "geometric" and self.lo <= 0:
            raise ValueError("geometric spacing requires lo > 0")

    def values(self) -> np.ndarray:
        if self._cache is None:
            if self.spacing == "uniform":
                xs = np.linspace(self.lo, self.hi, self.points)
            else:
                xs = np.geomspace(self.lo, self.hi, self.points)
            xs[0], xs[-1] = self.lo, self.hi
            xs.setflags(write=False)
            object.__setattr__(self, "_cache", xs)
        return self._cache

    def __len__(self):
        return self.points

    def to_dict(self):
        return {"lo": self.lo, "hi": self.hi, "points": self.points, "spacing": self.spacing}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["lo"]), float(d["hi"]), int(d["points"]), d.get("spacing", "uniform"))


DEFAULT_GRID = Grid(1e-3, 20.0, 400)


def _panel_sums(g, a, b):
    """Gauss-Legendre sums of ``g`` over each panel ``[a_i, b_i]``.

    Returns shape ``(m, k)`` for ``k`` panels; scalar integrands give m = 1.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = np.asarray(g(u), dtype=float)
    if vals.ndim == 1:
        vals = vals[None, :]
    if vals.shape[-1] != u.size:
        raise ValueError("integrand must return one value per abscissa (last axis)")
    if np.isnan(vals).any():
        bad = u[np.isnan(vals).any(axis=0)][0]
        raise IntegrandError(f"integrand returned NaN at abscissa {bad!r}")
    vals = vals.reshape(vals.shape[0], a.size, _GL_ORDER)
    return (vals @ _GL_WEIGHTS) * half[None, :]


def _adaptive_unit(g, atol, rtol, budget):
    """Adaptive bisection on [0, 1].

    Each panel's error is estimated as the gap between its own rule and the
    sum over its two halves; a panel is accepted once that gap is below its
    width share of ``max(atol, rtol*|total|)`` for every component.
    """
    edges = np.linspace(0.0, 1.0, _INITIAL_PANELS + 1)
    a, b = edges[:-1], edges[1:]
    coarse = _panel_sums(g, a, b)
    m = coarse.shape[0]
    evaluations = a.size * _GL_ORDER
    value = np.zeros(m)
    error = np.zeros(m)
    while a.size:
        mid = 0.5 * (a + b)
        left = _panel_sums(g, a, mid)
        right = _panel_sums(g, mid, b)
        evaluations += 2 * a.size * _GL_ORDER
        fine = left + right
        gap = np.abs(fine - coarse)
        total = value + fine.sum(axis=1)
        target = np.maximum(atol, rtol * np.abs(total))
        ok = np.all(gap <= target[:, None] * (b - a)[None, :], axis=0)
        value += fine[:, ok].sum(axis=1)
        error += gap[:, ok].sum(axis=1)
        if ok.all():
            break
        if evaluations > budget:
            partial = value + fine[:, ~ok].sum(axis=1)
            raise QuadratureError(
                f"quadrature failure: no convergence after {evaluations} evaluations",
                partial=_squeeze(partial),
                error_estimate=_squeeze(error + gap[:, ~ok].sum(axis=1)),
                evaluations=evaluations,
            )
        keep = ~ok
        a, b = np.concatenate([a[keep], mid[keep]]), np.concatenate([mid[keep], b[keep]])
        coarse = np.concatenate([left[:, keep], right[:, keep]], axis=1)
    return QuadratureResult(_squeeze(value), _squeeze(error), evaluations)


def _squeeze(arr):
    return float(arr[0]) if arr.shape == (1,) else arr


def integrate_semi_infinite(
    integrand: Callable[[np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
    *,
    atol: Optional[float] = None,
    scale: float = 1.0,
    budget: int = EVALUATION_BUDGET,
) -> QuadratureResult:
    """Integrate over ``[0, inf)`` after the substitution ``t = scale*u/(1-u)``.

    ``integrand`` is called with a 1-d array of abscissas.  The result meets
    ``|error| <= max(atol, tol*|value|)``; ``atol`` defaults to ``tol``.

    >>> round(integrate_semi_infinite(lambda t: np.exp(-t)).value, 12)
    1.0
    """
    atol = tol if atol is None else atol

    def on_unit(u):
        t = scale * u / (1.0 - u)
        jac = scale / (1.0 - u) ** 2
        vals = np.asarray(integrand(t), dtype=float)
        return vals * jac

    return _adaptive_unit(on_unit, atol, tol, budget)


def integrate_finite(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    atol: Optional[float] = None,
    budget: int = EVALUATION_BUDGET,
) -> QuadratureResult:
    """Integrate over ``[a, b]``; same tolerance contract as the semi-infinite case."""
    if not a <= b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    atol = tol if atol is None else atol
    width = b - a
    if width == 0:
        probe = np.asarray(integrand(np.array([a], dtype=float)), dtype=float)
        zero = np.zeros(probe.shape[:-1]) if probe.ndim > 1 else 0.0
        return QuadratureResult(zero, zero, 1)

    def on_unit(u):
        return np.asarray(integrand(a + width * u), dtype=float) * width

    return _adaptive_unit(on_unit, atol, tol, budget)


# integrate_panels allows at least this many evaluations per interval
_PANEL_SHARE = 2000


def _gl_sums(integrand, a, b, owner, indexed):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = integrand(u, np.repeat(owner, _GL_ORDER)) if indexed else integrand(u)
    vals = np.asarray(vals, dtype=float).reshape(a.size, _GL_ORDER)
    if np.isnan(vals).any():
        bad = u[np.isnan(vals).ravel()][0]
        raise IntegrandError(f"integrand returned NaN at abscissa {bad!r}")
    return (vals @ _GL_WEIGHTS) * half


def integrate_panels(integrand, lo, hi, tol=DEFAULT_TOL, *, atol=0.0, budget=EVALUATION_BUDGET, indexed=False):
    """Integrate one scalar function over many intervals ``[lo_i, hi_i]`` at once.

    Each interval is refined on its own, so a hard interval costs nothing
    for the easy ones.  ``integrand`` takes a 1-d array of abscissas; with
    ``indexed=True`` it also gets, per abscissa, the index of its interval.
    The evaluation limit is ``max(budget, 2000 * intervals)``.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = lo.size
    width = hi - lo
    limit = max(budget, _PANEL_SHARE * n)
    a, b, owner = lo.copy(), hi.copy(), np.arange(n)
    coarse = _gl_sums(integrand, a, b, owner, indexed)
    evaluations = n * _GL_ORDER
    value = np.zeros(n)
    error = np.zeros(n)
    while a.size:
        mid = 0.5 * (a + b)
        left = _gl_sums(integrand, a, mid, owner, indexed)
        right = _gl_sums(integrand, mid, b, owner, indexed)
        evaluations += 2 * a.size * _GL_ORDER
        fine = left + right
        gap = np.abs(fine - coarse)
        total = value + np.bincount(owner, fine, minlength=n)
        target = np.maximum(atol, tol * np.abs(total))[owner]
        with np.errstate(invalid="ignore", divide="ignore"):
            share = np.where(width[owner] > 0, (b - a) / width[owner], 1.0)
        ok = gap <= target * share
        value += np.bincount(owner[ok], fine[ok], minlength=n)
        error += np.bincount(owner[ok], gap[ok], minlength=n)
        if ok.all():
            break
        keep = ~ok
        if evaluations > limit:
            raise QuadratureError(
                f"quadrature failure: no convergence after {evaluations} evaluations",
                partial=_squeeze(value + np.bincount(owner[keep], fine[keep], minlength=n)),
                error_estimate=_squeeze(error + np.bincount(owner[keep], gap[keep], minlength=n)),
                evaluations=evaluations,
            )
        a, b = np.concatenate([a[keep], mid[keep]]), np.concatenate([mid[keep], b[keep]])
        owner = np.concatenate([owner[keep], owner[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
    return QuadratureResult(_squeeze(value), _squeeze(error), evaluations)


def tail_integrals(fn, xs, tol=DEFAULT_TOL, *, budget=EVALUATION_BUDGET):
    """``int_x^inf fn(u) du`` for every ``x`` in ``xs``.

    The tail beyond ``max(xs)`` is integrated once; the gaps between sorted
    abscissas are integrated as panels and accumulated from the right, so the
    cost grows with the number of points rather than with nesting depth.
    """
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    order = np.unique(flat)
    top = order[-1]
    tail = integrate_semi_infinite(
        lambda t: fn(top + t), tol, atol=0.0, scale=max(1.0, 0.1 * top), budget=budget
    ).value
    if order.size > 1:
        gaps = integrate_panels(fn, order[:-1], order[1:], tol, budget=budget).value
        gaps = np.atleast_1d(gaps)
        acc = tail + np.concatenate([np.cumsum(gaps[::-1])[::-1], [0.0]])
    else:
        acc = np.array([tail])
    out = acc[np.searchsorted(order, flat)]
    return out.reshape(xs.shape)


@dataclass(frozen=True)
class MonotoneVerdict:
    """Outcome of a monotonicity scan.

    ``index`` is the position of the first value that breaks the direction
    and ``violation`` the size of that break; ``max_violation`` covers the
    whole sequence.
    """

    holds: bool
    index: Optional[int]
    violation: float
    max_violation: float
    worst_index: Optional[int]

    def __bool__(self):
        return self.holds


def is_monotone(values, direction: str = "increasing", tol: float = 0.0) -> MonotoneVerdict:
    """Check that ``values`` move in ``direction`` up to an absolute slack ``tol``.

    >>> is_monotone([1, 2, 1.5]).index
    2
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 2:
        raise ValueError("need a 1-d sequence with at least two values")
    steps = np.diff(vals)
    if direction == "increasing":
        drops = -steps
    elif direction == "decreasing":
        drops = steps
    else:
        raise ValueError(f"direction must be 'increasing' or 'decreasing', got {direction!r}")
    drops = np.where(np.isnan(drops), np.inf, drops)
    bad = np.flatnonzero(drops > tol)
    worst = int(np.argmax(drops))
    max_violation = max(float(drops[worst]), 0.0) + 0.0
    if bad.size == 0:
        return MonotoneVerdict(True, None, 0.0, max_violation, None)
    first = int(bad[0])
    return MonotoneVerdict(False, first + 1, float(drops[first]), max_violation, worst + 1)


def find_sign_change(g, grid: Grid) -> Optional[tuple[float, float]]:
    """First grid bracket where ``g`` changes sign strictly, or None.

    Exact zeros on the grid are stepped over, so a root sitting on an
    abscissa yields the pair of its nonzero neighbours.
    """
    xs = grid.values()
    vals = _eval_on(g, xs)
    nz = np.flatnonzero(vals != 0)
    if nz.size < 2:
        return None
    prod = vals[nz[:-1]] * vals[nz[1:]]
    hits = np.flatnonzero(prod < 0)
    if hits.size == 0:
        return None
    i = int(hits[0])
    return float(xs[nz[i]]), float(xs[nz[i + 1]])


def _eval_on(g, xs):
    try:
        vals = np.asarray(g(xs), dtype=float)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(g(float(x))) for x in xs])


def bisect_root(g, lo, hi, xtol=1e-12, maxiter=200):
    """Root of a scalar function bracketed by ``[lo, hi]``."""
    glo = g(lo)
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def second_differences(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return v[2:] - 2.0 * v[1:-1] + v[:-2]
