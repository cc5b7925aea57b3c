"""Joint law of the residual life and the random age, and its dependence checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aging import TP2Verdict, minors_verdict
from .distributions import DomainError, _arr
from .mixing import require_density
from .mixture import ResidualMixture
from .numerics import DEFAULT_MONOTONE_TOL, Grid, integrate_semi_infinite

DEFAULT_DEP_GRID = Grid(1e-3, 10.0, 60)


class JointAgeModel:
    """The pair ``(X*, Theta)`` behind a residual mixture."""

    def __init__(self, mx: ResidualMixture):
        self.mx = mx
        self.baseline = mx.baseline
        self.mixing = mx.mixing

    def __repr__(self):
        return f"JointAgeModel({self.mx!r})"

    def joint_pdf(self, x, theta):
        """``f(x + theta) h(theta) / sf(theta)``, broadcast over ``x`` and ``theta``."""
        require_density(self.mixing, "joint_pdf")
        x, theta = np.broadcast_arrays(_arr(x), _arr(theta))
        base = self.baseline
        with np.errstate(invalid="ignore", divide="ignore"):
            logv = (
                np.asarray(base.logpdf(x + theta), dtype=float)
                + np.asarray(self.mixing.dist.logpdf(theta), dtype=float)
                - np.asarray(base.logsf(theta), dtype=float)
            )
        out = np.exp(np.where(np.isnan(logv), -np.inf, logv))
        return float(out) if out.ndim == 0 else out

    def conditional_sf(self, x, theta):
        """``P(X* > x | Theta = theta) = sf(x + theta) / sf(theta)``."""
        x, theta = np.broadcast_arrays(_arr(x), _arr(theta))
        base = self.baseline
        with np.errstate(invalid="ignore"):
            d = np.asarray(base.logsf(x + theta), dtype=float) - np.asarray(base.logsf(theta), dtype=float)
        out = np.exp(np.where(np.isnan(d), -np.inf, d))
        return float(out) if out.ndim == 0 else out

    def joint_sf(self, x, theta):
        """``P(X* > x, Theta > theta)``, broadcast over ``x`` and ``theta``."""
        x, theta = np.broadcast_arrays(_arr(x), _arr(theta))
        shape = x.shape
        xf, tf = x.ravel(), theta.ravel()
        m = self.mixing
        if m.is_discrete:
            above = m.atoms[None, :] > tf[:, None]
            vals = self.conditional_sf(xf[:, None], m.atoms[None, :])
            out = (vals * above) @ m.weights
        else:
            dens = m.dist

            def integrand(t):
                w = tf[:, None] + t[None, :]
                return self.conditional_sf(xf[:, None], w) * np.asarray(dens.pdf(w), dtype=float)

            out = np.atleast_1d(
                integrate_semi_infinite(integrand, self.mx.quad_tol, scale=m._scale).value
            )
        out = np.clip(out, 0.0, 1.0).reshape(shape)
        return float(out) if out.ndim == 0 else out


def joint_pdf(jm: JointAgeModel, x, theta):
    return jm.joint_pdf(x, theta)


def joint_sf(jm: JointAgeModel, x, theta):
    return jm.joint_sf(x, theta)


@dataclass(frozen=True)
class DependenceVerdict:
    """Positive/negative dependence outcome, e.g. PLRD vs NLRD.

    ``label`` is the positive name, the negative name, "both" or "neither".
    """

    relation: str
    label: str
    positive: bool
    negative: bool
    max_violation_positive: float
    max_violation_negative: float
    tol: float
    positive_witness: object = None
    negative_witness: object = None

    def to_dict(self):
        return {
            "relation": self.relation,
            "label": self.label,
            "positive": self.positive,
            "negative": self.negative,
            "max_violation_positive": self.max_violation_positive,
            "max_violation_negative": self.max_violation_negative,
            "tol": self.tol,
            "positive_witness": _listify(self.positive_witness),
            "negative_witness": _listify(self.negative_witness),
        }


def _listify(w):
    return list(w) if isinstance(w, tuple) else w


def _label(pos_name, neg_name, positive, negative):
    if positive and negative:
        return "both"
    return pos_name if positive else neg_name if negative else "neither"


def _from_minors(relation, pos_name, neg_name, v: TP2Verdict) -> DependenceVerdict:
    return DependenceVerdict(
        relation,
        _label(pos_name, neg_name, v.tp2, v.rr2),
        v.tp2,
        v.rr2,
        max(-v.min_minor, 0.0) + 0.0,
        max(v.max_minor, 0.0) + 0.0,
        v.tol,
        v.tp2_witness,
        v.rr2_witness,
    )


def check_plrd_nlrd(jm: JointAgeModel, xgrid: Grid = DEFAULT_DEP_GRID, thetagrid: Grid = DEFAULT_DEP_GRID, tol: float = 1e-6):
    """TP2 (PLRD) or RR2 (NLRD) of the joint density over the grid product."""
    require_density(jm.mixing, "check_plrd_nlrd")
    xs, ts = xgrid.values(), thetagrid.values()
    table = jm.joint_pdf(xs[:, None], ts[None, :])
    return _from_minors("PLRD/NLRD", "PLRD", "NLRD", minors_verdict(table, xs, ts, tol))


def check_rcsi_rcsd(jm: JointAgeModel, xgrid: Grid = DEFAULT_DEP_GRID, thetagrid: Grid = DEFAULT_DEP_GRID, tol: float = 1e-6):
    """TP2 (RCSI) or RR2 (RCSD) of the joint survival function."""
    xs, ts = xgrid.values(), thetagrid.values()
    table = jm.joint_sf(xs[:, None], ts[None, :])
    return _from_minors("RCSI/RCSD", "RCSI", "RCSD", minors_verdict(table, xs, ts, tol))


def check_si_sd(jm: JointAgeModel, xgrid: Grid = DEFAULT_DEP_GRID, thetagrid: Grid = DEFAULT_DEP_GRID, tol: float = DEFAULT_MONOTONE_TOL):
    """Monotonicity in ``theta`` of ``P(X* > x | Theta = theta)`` for each ``x``."""
    xs, ts = xgrid.values(), thetagrid.values()
    table = jm.conditional_sf(xs[:, None], ts[None, :])
    if not np.all(np.isfinite(table)):
        raise DomainError("conditional survival undefined on part of the age grid")
    steps = np.diff(table, axis=1)
    up_i = np.unravel_index(int(np.argmin(steps)), steps.shape)
    dn_i = np.unravel_index(int(np.argmax(steps)), steps.shape)
    drop, rise = -float(steps[up_i]), float(steps[dn_i])
    positive, negative = drop <= tol, rise <= tol
    return DependenceVerdict(
        "SI/SD",
        _label("SI", "SD", positive, negative),
        positive,
        negative,
        max(drop, 0.0) + 0.0,
        max(rise, 0.0) + 0.0,
        tol,
        None if positive else (float(xs[up_i[0]]), float(ts[up_i[1] + 1])),
        None if negative else (float(xs[dn_i[0]]), float(ts[dn_i[1] + 1])),
    )


__all__ = [
    "JointAgeModel",
    "DependenceVerdict",
    "joint_pdf",
    "joint_sf",
    "check_plrd_nlrd",
    "check_si_sd",
    "check_rcsi_rcsd",
    "DEFAULT_DEP_GRID",
]
