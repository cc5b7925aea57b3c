"""Scenario catalog, reports, and the Monte Carlo engine."""

from .catalog import CATALOG, DEFAULT_SEED, Scenario, Settings, UnknownScenarioError, catalog, run_scenario, scenario_seed
from .montecarlo import (
    IndependenceResult,
    McConfig,
    independence_check,
    ks_statistic,
    ks_threshold,
    ks_two_sample,
    mc_k_out_n_residuals,
    mc_spacings,
)
from .report import CheckResult, Report, reports_from_csv, reports_to_csv

__all__ = [
    "CATALOG",
    "DEFAULT_SEED",
    "Scenario",
    "Settings",
    "UnknownScenarioError",
    "catalog",
    "run_scenario",
    "scenario_seed",
    "IndependenceResult",
    "McConfig",
    "independence_check",
    "ks_statistic",
    "ks_threshold",
    "ks_two_sample",
    "mc_k_out_n_residuals",
    "mc_spacings",
    "CheckResult",
    "Report",
    "reports_from_csv",
    "reports_to_csv",
]
