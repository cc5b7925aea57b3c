"""Grid checks of stochastic orders between distribution-like objects.

Anything exposing the needed quantities (``sf``, ``logpdf``, ``hazard``...)
can be compared: baselines, mixtures, or mixing distributions.  A verdict
that "holds" only says no violation above ``tol`` was seen on the grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import DEFAULT_GRID, DEFAULT_MONOTONE_TOL, Grid, is_monotone

# share of grid points that may be dropped before a verdict is inconclusive
MAX_EXCLUDED = 0.10
QUADRATURE_LR_TOL = 1e-5

DEFAULT_TGRID = Grid(1e-3, 10.0, 60)
DEFAULT_XGRID = Grid(0.0, 5.0, 20)


class OrderKind(enum.Enum):
    LR = "LR"
    HR = "HR"
    RH = "RH"
    ST = "ST"
    MRL = "MRL"
    AI = "AI"
    UP_LR = "UP_LR"
    UP_HR = "UP_HR"
    UP_MRL = "UP_MRL"


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of checking ``X <= Y`` in the order ``kind``.

    ``witness`` is a grid point (or a ``(t, x)`` pair for up-shifted orders)
    where the defining inequality is broken by more than ``tol``.
    """

    kind: OrderKind
    holds: bool
    witness: Optional[object]
    max_violation: float
    grid: object
    tol: float
    excluded: int = 0
    inconclusive: bool = False

    def __bool__(self):
        return self.holds

    @property
    def status(self):
        if self.inconclusive:
            return "inconclusive"
        return "holds" if self.holds else "fails"

    def to_dict(self):
        grid = self.grid
        if isinstance(grid, tuple):
            grid = [g.to_dict() for g in grid]
        else:
            grid = grid.to_dict()
        witness = self.witness
        if isinstance(witness, tuple):
            witness = list(witness)
        return {
            "kind": self.kind.value,
            "holds": self.holds,
            "status": self.status,
            "witness": witness,
            "max_violation": self.max_violation,
            "grid": grid,
            "tol": self.tol,
            "excluded": self.excluded,
        }


def _values(obj, name, xs):
    with np.errstate(all="ignore"):
        return np.asarray(getattr(obj, name)(xs), dtype=float)


def _log_values(obj, name, xs):
    if name == "sf" and hasattr(obj, "logsf"):
        return _values(obj, "logsf", xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(_values(obj, name, xs))


# pointwise orders: quantity compared and the sign making "X <= Y" read diff <= 0
_POINTWISE = {
    OrderKind.ST: ("sf", 1.0),
    OrderKind.HR: ("hazard", -1.0),
    OrderKind.RH: ("reversed_hazard", 1.0),
    OrderKind.MRL: ("mrl", 1.0),
}


def _cumhaz(obj, xs):
    if hasattr(obj, "cumulative_hazard"):
        lam = _values(obj, "cumulative_hazard", xs)
    else:
        lam = -_values(obj, "logsf", xs)
    return lam


def _pointwise(kind, diff, xs, grid, tol, valid):
    """Verdict for an inequality ``diff <= 0`` required at every valid point."""
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * xs.size:
        return OrderVerdict(kind, False, None, float("nan"), grid, tol, excluded, True)
    d = np.where(valid, diff, -np.inf)
    worst = int(np.argmax(d))
    max_violation = float(max(d[worst], 0.0))
    if max_violation > tol:
        return OrderVerdict(kind, False, float(xs[worst]), max_violation, grid, tol, excluded)
    return OrderVerdict(kind, True, None, max_violation, grid, tol, excluded)


def _monotone(kind, values, xs, direction, grid, tol, valid):
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * xs.size or valid.sum() < 2:
        return OrderVerdict(kind, False, None, float("nan"), grid, tol, excluded, True)
    keep_x = xs[valid]
    mv = is_monotone(values[valid], direction, tol)
    if mv.holds:
        return OrderVerdict(kind, True, None, mv.max_violation, grid, tol, excluded)
    return OrderVerdict(kind, False, float(keep_x[mv.index]), mv.max_violation, grid, tol, excluded)


def _lr_tol(X, Y, tol):
    exact = getattr(X, "closed_form_pdf", True) and getattr(Y, "closed_form_pdf", True)
    return tol if exact else max(tol, QUADRATURE_LR_TOL)


def check_order(X, Y, kind, grid: Grid = DEFAULT_GRID, tol: float = DEFAULT_MONOTONE_TOL) -> OrderVerdict:
    """Check ``X <= Y`` in the order ``kind`` on ``grid``.

    ST, HR, RH and MRL compare logs of the defining quantity pointwise, so
    ``tol`` is a relative slack there.  LR checks that the log density ratio
    ``log g - log f`` increases; AI that ``Lambda_X / Lambda_Y`` increases
    with ``Lambda = -log sf``.

    >>> from resilife.distributions import Exponential
    >>> check_order(Exponential(2.0), Exponential(1.0), "ST").holds
    True
    """
    kind = OrderKind(kind) if not isinstance(kind, OrderKind) else kind
    xs = grid.values()
    pointwise = _POINTWISE.get(kind)
    if pointwise is not None:
        name, sign = pointwise
        a, b = _log_values(X, name, xs), _log_values(Y, name, xs)
        with np.errstate(invalid="ignore"):
            diff = sign * (a - b)
        return _pointwise(kind, diff, xs, grid, tol, np.isfinite(diff))
    if kind is OrderKind.LR:
        lf, lg = _values(X, "logpdf", xs), _values(Y, "logpdf", xs)
        valid = np.isfinite(lf) & np.isfinite(lg)
        with np.errstate(invalid="ignore"):
            logratio = lg - lf
        return _monotone(kind, logratio, xs, "increasing", grid, _lr_tol(X, Y, tol), valid)
    if kind is OrderKind.AI:
        lx, ly = _cumhaz(X, xs), _cumhaz(Y, xs)
        valid = np.isfinite(lx) & np.isfinite(ly) & (ly > 0)
        with np.errstate(all="ignore"):
            ratio = lx / ly
        return _monotone(kind, ratio, xs, "increasing", grid, tol, valid & np.isfinite(ratio))
    raise ValueError(f"{kind.value} is an up-shifted order; use check_upshifted_order")


def check_upshifted_order(
    X,
    Y,
    kind,
    tgrid: Grid = DEFAULT_TGRID,
    xgrid: Grid = DEFAULT_XGRID,
    tol: float = DEFAULT_MONOTONE_TOL,
) -> OrderVerdict:
    """Check ``X - x <= Y`` for every shift ``x`` in ``xgrid``.

    For each shift the log of ``f_X(t + x) / f_Y(t)`` (sf for UP_HR, the
    integrated sf for UP_MRL) must be nonincreasing in ``t``.
    """
    kind = OrderKind(kind) if not isinstance(kind, OrderKind) else kind
    quantity = {
        OrderKind.UP_LR: "logpdf",
        OrderKind.UP_HR: "logsf",
        OrderKind.UP_MRL: "log_integrated_sf",
    }.get(kind)
    if quantity is None:
        raise ValueError(f"{kind.value} is not an up-shifted order")
    if kind is OrderKind.UP_LR:
        tol = _lr_tol(X, Y, tol)
    ts, shifts = tgrid.values(), xgrid.values()
    grid = (tgrid, xgrid)
    shifted = np.add.outer(shifts, ts)
    uniq, inv = np.unique(shifted, return_inverse=True)
    top = _values(X, quantity, uniq)[inv].reshape(shifted.shape)
    bottom = _values(Y, quantity, ts)
    logratio = top - bottom[None, :]
    valid = np.isfinite(logratio)
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * valid.size:
        return OrderVerdict(kind, False, None, float("nan"), grid, tol, excluded, True)
    steps = np.diff(logratio, axis=1)
    steps = np.where(valid[:, 1:] & valid[:, :-1], steps, -np.inf)
    worst = np.unravel_index(int(np.argmax(steps)), steps.shape)
    max_violation = float(max(steps[worst], 0.0))
    if max_violation > tol:
        i, j = worst
        return OrderVerdict(kind, False, (float(ts[j + 1]), float(shifts[i])), max_violation, grid, tol, excluded)
    return OrderVerdict(kind, True, None, max_violation, grid, tol, excluded)


__all__ = [
    "OrderKind",
    "OrderVerdict",
    "check_order",
    "check_upshifted_order",
    "DEFAULT_TGRID",
    "DEFAULT_XGRID",
]
