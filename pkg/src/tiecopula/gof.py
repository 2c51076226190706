"""Cramer-von Mises goodness-of-fit test with a tie-preserving bootstrap."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .bootstrap import MatchTies, NoTies, TiePattern, check_failures
from .copulas import CopulaSpec, Family
from .mple import FitResult, fit_censoring
from .ranks import CensoredPseudoSample
from .streams import as_seed_sequence, describe, generator, replicate_map

log = logging.getLogger(__name__)

MIN_GOF_REPLICATES = 100


@dataclass(frozen=True, eq=False)
class GofResult:
    statistic: float
    p_value: float
    B: int
    replicate_stats: np.ndarray
    fitted: FitResult
    n_failed: int = 0
    bootstrap: str = "match"
    seed: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.fitted.family.value,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "B": self.B,
            "n_failed": self.n_failed,
            "bootstrap": self.bootstrap,
            "fit": self.fitted.to_dict(),
            "seed": self.seed,
        }


def empirical_copula(data: CensoredPseudoSample, u, v):
    """C_n(u, v) = (1/n) #{i : U_i <= u, V_i <= v} with U_i the upper bounds."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    below = (data.u_up <= u[..., None]) & (data.v_up <= v[..., None])
    out = below.mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def _empirical_at_points(data: CensoredPseudoSample) -> np.ndarray:
    ru, rv = data.u_rank_up, data.v_rank_up
    return ((ru[None, :] <= ru[:, None]) & (rv[None, :] <= rv[:, None])).mean(axis=1)


def cvm_statistic(spec: CopulaSpec, data: CensoredPseudoSample) -> float:
    """Sum over observations of (C_n - C_theta)^2 at the upper-bound points."""
    diff = _empirical_at_points(data) - spec.cdf(data.u_up, data.v_up)
    return float(np.sum(diff * diff))


def p_value(statistic: float, replicate_stats, plus_one: bool = False) -> float:
    stats = np.asarray(replicate_stats, dtype=float)
    exceed = int(np.sum(stats >= statistic))
    if plus_one:
        return (exceed + 1) / (stats.size + 1)
    return exceed / stats.size


def _replicate_stat(family: Family, theta: float, build, ss, b: int) -> float | None:
    pairs = CopulaSpec(family, theta).sample(build.n, generator(ss, b))
    try:
        data = build(pairs)
        res = fit_censoring(family, data)
    except ValueError as exc:
        log.debug("replicate %d failed: %s", b, exc)
        return None
    if not res.converged:
        return None
    return cvm_statistic(res.spec, data)


def run_gof(family, data: CensoredPseudoSample, B: int, seed, build, *, label: str,
            plus_one: bool = False, n_jobs: int = 1) -> GofResult:
    """Bootstrap GoF test with an arbitrary ``pairs -> sample`` replicate builder."""
    family = Family.parse(family)
    if B < MIN_GOF_REPLICATES:
        raise ValueError(f"need B >= {MIN_GOF_REPLICATES} bootstrap replicates, got {B}")
    fitted = fit_censoring(family, data)
    observed = cvm_statistic(fitted.spec, data)
    ss = as_seed_sequence(seed)
    task = partial(_replicate_stat, family, fitted.theta_hat, build, ss)
    stats = [s for s in replicate_map(task, range(B), n_jobs) if s is not None]
    n_failed = B - len(stats)
    check_failures(n_failed, B)
    stats = np.array(stats)
    return GofResult(
        statistic=observed,
        p_value=p_value(observed, stats, plus_one),
        B=B,
        replicate_stats=stats,
        fitted=fitted,
        n_failed=n_failed,
        bootstrap=label,
        seed=describe(ss),
    )


def gof_test(family, data: CensoredPseudoSample, B: int = 1000, seed=None, *,
             preserve_ties: bool = True, plus_one: bool = False, n_jobs: int = 1) -> GofResult:
    """Test H0: the copula belongs to ``family``.

    With ``preserve_ties=False`` the replicates are left untied, which is
    the standard parametric bootstrap and is only meant for comparison.
    """
    if preserve_ties:
        build, label = MatchTies(TiePattern.from_sample(data)), "match"
    else:
        build, label = NoTies(data.n), "standard"
    return run_gof(family, data, B, seed, build, label=label, plus_one=plus_one, n_jobs=n_jobs)
