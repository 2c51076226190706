"""Parametric bootstrap that reproduces the observed tie pattern.

Fresh tie-free samples are drawn from the fitted copula and mapped through
the quantile functions of the observed marginal pseudo-observations.
Because a tie-free sample of size ``n`` has marginal ranks ``1..n``, that
map is the same as giving the element of marginal rank ``i`` the ``i``-th
smallest observed pseudo-observation, which is how it is computed here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .copulas import CopulaSpec, Family, theta_to_tau
from .mple import FitResult, fit_censoring
from .ranks import CensoredPseudoSample
from .streams import as_seed_sequence, describe, generator, replicate_map

log = logging.getLogger(__name__)

MIN_CI_REPLICATES = 100
MAX_FAILURE_RATE = 0.05


class BootstrapFailure(RuntimeError):
    """Too many bootstrap replicates failed to produce a usable fit."""


@dataclass(frozen=True, eq=False)
class TiePattern:
    """Sorted rank bounds of each margin of an observed sample."""

    u_up: np.ndarray
    u_lo: np.ndarray
    v_up: np.ndarray
    v_lo: np.ndarray

    @property
    def n(self) -> int:
        return self.u_up.size

    @classmethod
    def from_sample(cls, data: CensoredPseudoSample) -> "TiePattern":
        return cls(np.sort(data.u_rank_up), np.sort(data.u_rank_lo),
                   np.sort(data.v_rank_up), np.sort(data.v_rank_lo))

    @classmethod
    def untied(cls, n: int) -> "TiePattern":
        r = np.arange(1, n + 1)
        return cls(r, r, r, r)


def _marginal_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    if np.any(values[order[1:]] == values[order[:-1]]):
        raise RuntimeError("bootstrap sample has tied coordinates; sampler is broken")
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(values.size)
    return ranks


def adjust_ties(pattern: TiePattern, fresh) -> CensoredPseudoSample:
    """Impose the observed tie pattern on a tie-free sample of pairs."""
    fresh = np.asarray(fresh, dtype=float)
    if fresh.shape != (pattern.n, 2):
        raise ValueError(f"expected {pattern.n} pairs, got array of shape {fresh.shape}")
    ru = _marginal_ranks(fresh[:, 0])
    rv = _marginal_ranks(fresh[:, 1])
    return CensoredPseudoSample(pattern.u_up[ru], pattern.u_lo[ru], pattern.v_up[rv], pattern.v_lo[rv])


def percentile_interval(values, alpha: float) -> tuple[float, float]:
    """Empirical alpha/2 and 1 - alpha/2 quantiles (linear interpolation)."""
    lo, hi = np.quantile(np.asarray(values, dtype=float), [alpha / 2.0, 1.0 - alpha / 2.0])
    return float(lo), float(hi)


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    fit: FitResult
    estimates: np.ndarray
    ci_lower: float
    ci_upper: float
    tau_ci_lower: float
    tau_ci_upper: float
    alpha: float
    B: int
    n_failed: int
    seed: dict = field(default_factory=dict)

    @property
    def tau_estimates(self) -> np.ndarray:
        return np.array([theta_to_tau(self.fit.family, t) for t in self.estimates])

    def covers_tau(self, tau: float) -> bool:
        return self.tau_ci_lower <= tau <= self.tau_ci_upper

    def to_dict(self) -> dict:
        return {
            "fit": self.fit.to_dict(),
            "alpha": self.alpha,
            "B": self.B,
            "n_failed": self.n_failed,
            "ci_theta": [self.ci_lower, self.ci_upper],
            "ci_tau": [self.tau_ci_lower, self.tau_ci_upper],
            "seed": self.seed,
        }


def _refit(family: Family, theta: float, make_data, ss, b: int) -> FitResult | None:
    rng = generator(ss, b)
    data = make_data(CopulaSpec(family, theta).sample(make_data.n, rng))
    try:
        res = fit_censoring(family, data)
    except ValueError as exc:
        log.debug("replicate %d failed: %s", b, exc)
        return None
    return res if res.converged else None


class MatchTies:
    """Replicate builder: impose a fixed tie pattern on fresh pairs."""

    def __init__(self, pattern: TiePattern):
        self.pattern = pattern
        self.n = pattern.n

    def __call__(self, pairs) -> CensoredPseudoSample:
        return adjust_ties(self.pattern, pairs)


class NoTies:
    """Replicate builder for the standard bootstrap: plain ranks, no ties."""

    def __init__(self, n: int):
        self.n = n

    def __call__(self, pairs) -> CensoredPseudoSample:
        pairs = np.asarray(pairs, dtype=float)
        ru = _marginal_ranks(pairs[:, 0]) + 1
        rv = _marginal_ranks(pairs[:, 1]) + 1
        return CensoredPseudoSample(ru, ru, rv, rv)


def check_failures(n_failed: int, B: int) -> None:
    if n_failed > MAX_FAILURE_RATE * B:
        raise BootstrapFailure(f"{n_failed} of {B} bootstrap replicates failed")


def bootstrap_ci(
    family,
    data: CensoredPseudoSample,
    B: int = 1000,
    alpha: float = 0.05,
    seed=None,
    *,
    fit: FitResult | None = None,
    n_jobs: int = 1,
) -> BootstrapResult:
    """Percentile confidence interval from the tie-preserving bootstrap."""
    family = Family.parse(family)
    if B < MIN_CI_REPLICATES:
        raise ValueError(f"need B >= {MIN_CI_REPLICATES} bootstrap replicates, got {B}")
    if not 0.0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 0.5)")
    if fit is None:
        fit = fit_censoring(family, data)
    if not fit.converged:
        raise BootstrapFailure("the fit to the observed data did not converge")
    ss = as_seed_sequence(seed)
    task = partial(_refit, family, fit.theta_hat, MatchTies(TiePattern.from_sample(data)), ss)
    fits = replicate_map(task, range(B), n_jobs)
    good = [f for f in fits if f is not None]
    n_failed = B - len(good)
    check_failures(n_failed, B)
    theta = np.array([f.theta_hat for f in good])
    tau = np.array([f.tau_hat for f in good])
    lo, hi = percentile_interval(theta, alpha)
    tlo, thi = percentile_interval(tau, alpha)
    return BootstrapResult(
        fit=fit, estimates=theta, ci_lower=lo, ci_upper=hi, tau_ci_lower=tlo, tau_ci_upper=thi,
        alpha=alpha, B=B, n_failed=n_failed, seed=describe(ss),
    )

