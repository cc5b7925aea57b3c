"""Aging-class membership, log-concavity, and TP2/RR2 checks on grids."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import DomainError
from .numerics import DEFAULT_GRID, DEFAULT_MONOTONE_TOL, Grid, is_monotone, second_differences
from .orders import MAX_EXCLUDED

# NBU/NWU compare every pair from a thinned copy of the grid
PAIR_POINTS = 60


class AgingClass(enum.Enum):
    ILR = "ILR"
    DLR = "DLR"
    IFR = "IFR"
    DFR = "DFR"
    DMRL = "DMRL"
    IMRL = "IMRL"
    NBU = "NBU"
    NWU = "NWU"
    NBUE = "NBUE"
    NWUE = "NWUE"


@dataclass(frozen=True)
class ClassVerdict:
    cls: AgingClass
    holds: bool
    witness: Optional[object]
    max_violation: float
    grid: Grid
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
        witness = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        return {
            "cls": self.cls.value,
            "holds": self.holds,
            "status": self.status,
            "witness": witness,
            "max_violation": self.max_violation,
            "grid": self.grid.to_dict(),
            "tol": self.tol,
            "excluded": self.excluded,
        }


def _eval(dist, name, xs):
    with np.errstate(all="ignore"):
        return np.asarray(getattr(dist, name)(xs), dtype=float)


def _monotone_class(cls, values, xs, direction, grid, tol):
    valid = np.isfinite(values)
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * xs.size or valid.sum() < 2:
        return ClassVerdict(cls, False, None, float("nan"), grid, tol, excluded, True)
    keep = xs[valid]
    mv = is_monotone(values[valid], direction, tol)
    witness = None if mv.holds else float(keep[mv.index])
    return ClassVerdict(cls, mv.holds, witness, mv.max_violation, grid, tol, excluded)


def _curvature_class(cls, logf, xs, grid, tol):
    valid = np.isfinite(logf)
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * xs.size or valid.sum() < 3:
        return ClassVerdict(cls, False, None, float("nan"), grid, tol, excluded, True)
    keep = xs[valid]
    d2 = second_differences(logf[valid])
    # ILR wants nonpositive curvature, DLR nonnegative
    bad = d2 if cls is AgingClass.ILR else -d2
    worst = int(np.argmax(bad))
    max_violation = max(float(bad[worst]), 0.0) + 0.0
    if max_violation > tol:
        return ClassVerdict(cls, False, float(keep[worst + 1]), max_violation, grid, tol, excluded)
    return ClassVerdict(cls, True, None, max_violation, grid, tol, excluded)


def _thin(xs, count):
    if xs.size <= count:
        return xs
    return xs[np.unique(np.linspace(0, xs.size - 1, count).round().astype(int))]


def _nbu_class(cls, dist, xs, grid, tol):
    pts = _thin(xs, PAIR_POINTS)
    sums = np.add.outer(pts, pts)
    uniq, inv = np.unique(sums, return_inverse=True)
    joint = _eval(dist, "sf", uniq)[inv].reshape(sums.shape)
    single = _eval(dist, "sf", pts)
    prod = np.multiply.outer(single, single)
    diff = joint - prod if cls is AgingClass.NBU else prod - joint
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    max_violation = max(float(diff[worst]), 0.0) + 0.0
    if max_violation > tol:
        return ClassVerdict(cls, False, (float(pts[worst[0]]), float(pts[worst[1]])), max_violation, grid, tol)
    return ClassVerdict(cls, True, None, max_violation, grid, tol)


def check_aging_class(dist, cls, grid: Grid = DEFAULT_GRID, tol: float = DEFAULT_MONOTONE_TOL) -> ClassVerdict:
    """Check whether ``dist`` belongs to the aging class ``cls`` on ``grid``.

    >>> from resilife.distributions import Weibull
    >>> check_aging_class(Weibull(2.0, 1.0), "IFR").holds
    True
    """
    cls = AgingClass(cls) if not isinstance(cls, AgingClass) else cls
    xs = grid.values()
    if cls in (AgingClass.ILR, AgingClass.DLR):
        return _curvature_class(cls, _eval(dist, "logpdf", xs), xs, grid, tol)
    if cls in (AgingClass.IFR, AgingClass.DFR):
        direction = "increasing" if cls is AgingClass.IFR else "decreasing"
        return _monotone_class(cls, _eval(dist, "hazard", xs), xs, direction, grid, tol)
    if cls in (AgingClass.DMRL, AgingClass.IMRL):
        direction = "decreasing" if cls is AgingClass.DMRL else "increasing"
        return _monotone_class(cls, _eval(dist, "mrl", xs), xs, direction, grid, tol)
    if cls in (AgingClass.NBU, AgingClass.NWU):
        return _nbu_class(cls, dist, xs, grid, tol)
    # NBUE / NWUE: mean residual life against the mean
    mu = float(dist.mean())
    m = _eval(dist, "mrl", xs)
    diff = m - mu if cls is AgingClass.NBUE else mu - m
    valid = np.isfinite(diff)
    excluded = int((~valid).sum())
    if excluded > MAX_EXCLUDED * xs.size:
        return ClassVerdict(cls, False, None, float("nan"), grid, tol, excluded, True)
    diff = np.where(valid, diff, -np.inf)
    worst = int(np.argmax(diff))
    max_violation = max(float(diff[worst]), 0.0) + 0.0
    if max_violation > tol:
        return ClassVerdict(cls, False, float(xs[worst]), max_violation, grid, tol, excluded)
    return ClassVerdict(cls, True, None, max_violation, grid, tol, excluded)


def check_log_concavity(fn, grid: Grid = DEFAULT_GRID, tol: float = DEFAULT_MONOTONE_TOL) -> str:
    """Classify a positive ``fn`` as "log-concave", "log-convex", "both" or "neither".

    >>> check_log_concavity(lambda t: np.exp(-t), Grid(0.0, 5.0, 50))
    'both'
    """
    xs = grid.values()
    vals = np.asarray(fn(xs), dtype=float)
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise DomainError("log-concavity check needs a finite positive function on the grid")
    d2 = second_differences(np.log(vals))
    concave = bool(np.all(d2 <= tol))
    convex = bool(np.all(d2 >= -tol))
    if concave and convex:
        return "both"
    if concave:
        return "log-concave"
    if convex:
        return "log-convex"
    return "neither"


@dataclass(frozen=True)
class TP2Verdict:
    """Sign pattern of the adjacent 2x2 minors of a kernel on a grid product."""

    label: str
    min_minor: float
    max_minor: float
    tol: float
    tp2_witness: Optional[tuple] = None
    rr2_witness: Optional[tuple] = None

    @property
    def tp2(self):
        return self.label in ("TP2", "both")

    @property
    def rr2(self):
        return self.label in ("RR2", "both")

    def to_dict(self):
        return {
            "label": self.label,
            "min_minor": self.min_minor,
            "max_minor": self.max_minor,
            "tol": self.tol,
            "tp2_witness": list(self.tp2_witness) if self.tp2_witness else None,
            "rr2_witness": list(self.rr2_witness) if self.rr2_witness else None,
        }


def minors_verdict(values, xs, ys, tol) -> TP2Verdict:
    """Classify a precomputed kernel table ``values[i, j] = beta(xs[i], ys[j])``."""
    b = np.asarray(values, dtype=float)
    if np.any(b < 0) or np.any(np.isnan(b)):
        raise DomainError("TP2/RR2 check needs a nonnegative kernel")
    minors = b[:-1, :-1] * b[1:, 1:] - b[:-1, 1:] * b[1:, :-1]
    lo_i = np.unravel_index(int(np.argmin(minors)), minors.shape)
    hi_i = np.unravel_index(int(np.argmax(minors)), minors.shape)
    lo, hi = float(minors[lo_i]), float(minors[hi_i])
    tp2, rr2 = lo >= -tol, hi <= tol
    label = "both" if tp2 and rr2 else "TP2" if tp2 else "RR2" if rr2 else "neither"
    tp2_w = None if tp2 else (float(xs[lo_i[0]]), float(ys[lo_i[1]]))
    rr2_w = None if rr2 else (float(xs[hi_i[0]]), float(ys[hi_i[1]]))
    return TP2Verdict(label, lo, hi, tol, tp2_w, rr2_w)


def check_tp2_rr2(beta, xgrid: Grid, ygrid: Grid, tol: float = DEFAULT_MONOTONE_TOL) -> TP2Verdict:
    """TP2 iff every adjacent minor is >= -tol; RR2 iff every one is <= tol.

    >>> check_tp2_rr2(lambda x, y: np.exp(x * y), Grid(0, 1, 5), Grid(0, 1, 5)).label
    'TP2'
    """
    xs, ys = xgrid.values(), ygrid.values()
    values = np.asarray(beta(xs[:, None], ys[None, :]), dtype=float)
    return minors_verdict(np.broadcast_to(values, (xs.size, ys.size)), xs, ys, tol)


__all__ = [
    "AgingClass",
    "ClassVerdict",
    "TP2Verdict",
    "check_aging_class",
    "check_log_concavity",
    "check_tp2_rr2",
    "minors_verdict",
]
