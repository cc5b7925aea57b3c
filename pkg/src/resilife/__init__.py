"""Residual lifetimes of units of random age.

A unit with lifetime ``X`` has been running for a random time ``Theta``
when it is picked up; ``X*`` is what remains of it.  The package evaluates
``X*`` for any baseline and age law, checks aging classes, stochastic
orders and dependence on grids, and runs a catalog of reproducible
scenarios (see :mod:`resilife.verify` and the ``resilife`` command).
"""

from .aging import AgingClass, ClassVerdict, TP2Verdict, check_aging_class, check_log_concavity, check_tp2_rr2
from .dependence import DependenceVerdict, JointAgeModel, check_plrd_nlrd, check_rcsi_rcsd, check_si_sd, joint_pdf, joint_sf
from .distributions import (
    DomainError,
    Empirical,
    Exponential,
    HazardDefined,
    HyperExponential,
    LifetimeDistribution,
    LogLogistic,
    MeanUndefinedError,
    Quantity,
    Tabulated,
    Weibull,
    equilibrium,
    evaluate,
    residual_at_age,
)
from .mixing import Continuous, Degenerate, DiscreteAtoms, MixingDistribution, OrderStatistic, os_cdf, os_pdf
from .mixture import (
    ResidualMixture,
    conditional_age_cdf,
    equilibrium_mixture,
    mean_x_star,
    mixture_hazard,
    mixture_mrl,
    mixture_pdf,
    mixture_sf,
    posterior_age_pdf,
)
from .numerics import DEFAULT_GRID, Grid, IntegrandError, QuadratureError
from .orders import OrderKind, OrderVerdict, check_order, check_upshifted_order
from .specs import SpecError, parse_distribution, parse_mixing

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
