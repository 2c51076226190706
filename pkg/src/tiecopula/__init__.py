"""Rank-based copula estimation and goodness-of-fit testing for tied data."""

from .bootstrap import BootstrapFailure, BootstrapResult, TiePattern, adjust_ties, bootstrap_ci
from .copulas import CopulaDomainError, CopulaSpec, Family, tau_to_theta, theta_to_tau
from .gof import GofResult, cvm_statistic, empirical_copula, gof_test
from .mple import (
    FitResult,
    Method,
    fit,
    fit_average_rank,
    fit_censoring,
    fit_random_break,
    likelihood_contribution,
    likelihood_contributions,
    log_pseudo_likelihood,
)
from .ranks import (
    Case,
    CensoredPseudoSample,
    DegenerateDataError,
    RawSample,
    censor,
    kendall_tau_b,
    pseudo_observations,
)

__all__ = [
    "BootstrapFailure", "BootstrapResult", "TiePattern", "adjust_ties", "bootstrap_ci",
    "CopulaDomainError", "CopulaSpec", "Family", "tau_to_theta", "theta_to_tau",
    "GofResult", "cvm_statistic", "empirical_copula", "gof_test",
    "FitResult", "Method", "fit", "fit_average_rank", "fit_censoring", "fit_random_break",
    "likelihood_contribution", "likelihood_contributions", "log_pseudo_likelihood",
    "Case", "CensoredPseudoSample", "DegenerateDataError", "RawSample", "censor",
    "kendall_tau_b", "pseudo_observations",
]
