"""Maximum pseudo-likelihood estimation with interval-censored ranks.

Each observation contributes according to which of its margins is tied:
a rectangle probability when both are, a difference of conditional
distribution functions when exactly one is, and the density otherwise.
The average-rank and random tie-breaking estimators are provided as
baselines; both use the ordinary density-only pseudo-likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from .copulas import TAU_SEARCH_BOUNDS, CopulaSpec, Family, tau_to_theta, theta_to_tau
from .ranks import Case, CensoredPseudoSample, RawSample, censor, mid_rank_observations
from .streams import as_generator

FLOOR = 1e-300
LOG_FLOOR = math.log(FLOOR)
TAU_XTOL = 1e-7
MAX_ITER = 200
MIN_FIT_SIZE = 10
_BOUNDARY_MARGIN = 1e-6


class Method(str, Enum):
    CENSORING = "censoring"
    AVERAGE_RANK = "average"
    RANDOM_BREAK = "random"


@dataclass(frozen=True)
class FitResult:
    family: Family
    theta_hat: float
    tau_hat: float
    loglik: float
    iterations: int
    converged: bool
    method: Method

    @property
    def spec(self) -> CopulaSpec:
        return CopulaSpec(self.family, self.theta_hat)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "method": self.method.value,
            "theta": self.theta_hat,
            "tau": self.tau_hat,
            "loglik": self.loglik,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _contributions(spec, case, uu, ul, vu, vl):
    out = np.empty(case.size)
    idx = np.flatnonzero(case == Case.NO_TIES)
    if idx.size:
        out[idx] = spec.pdf(uu[idx], vu[idx])
    idx = np.flatnonzero(case == Case.X_TIED)
    if idx.size:
        out[idx] = spec.dC_dv(uu[idx], vu[idx]) - spec.dC_dv(ul[idx], vu[idx])
    idx = np.flatnonzero(case == Case.Y_TIED)
    if idx.size:
        out[idx] = spec.dC_du(uu[idx], vu[idx]) - spec.dC_du(uu[idx], vl[idx])
    idx = np.flatnonzero(case == Case.BOTH_TIED)
    if idx.size:
        out[idx] = _rectangle(spec, ul[idx], uu[idx], vl[idx], vu[idx])
    return out


def likelihood_contributions(spec: CopulaSpec, data: CensoredPseudoSample) -> np.ndarray:
    """Per-observation likelihood terms L_i (unclamped)."""
    return _contributions(spec, data.case, data.u_up, data.u_lo, data.v_up, data.v_lo)


def likelihood_contribution(spec: CopulaSpec, data: CensoredPseudoSample, i: int) -> float:
    """Likelihood term of observation ``i``."""
    sl = slice(i, i + 1)
    return float(_contributions(spec, data.case[sl], data.u_up[sl], data.u_lo[sl],
                                data.v_up[sl], data.v_lo[sl])[0])


def _rectangle(spec, u0, u1, v0, v1):
    c = spec.cdf(np.concatenate([u1, u0, u1, u0]), np.concatenate([v1, v1, v0, v0]))
    m = u0.size
    c11, c01, c10, c00 = c[:m], c[m:2 * m], c[2 * m:3 * m], c[3 * m:]
    # difference of near-equal pairs first, the two large terms last
    return (c11 - c01) - (c10 - c00)


class CensoredLikelihood:
    """Log pseudo-likelihood of one censored sample, with the case split cached."""

    def __init__(self, data: CensoredPseudoSample):
        case = data.case
        uu, ul, vu, vl = data.u_up, data.u_lo, data.v_up, data.v_lo
        i4 = np.flatnonzero(case == Case.NO_TIES)
        i2 = np.flatnonzero(case == Case.X_TIED)
        i3 = np.flatnonzero(case == Case.Y_TIED)
        i1 = np.flatnonzero(case == Case.BOTH_TIED)
        self.n = data.n
        self._dens = (uu[i4], vu[i4]) if i4.size else None
        # both one-margin cases are differences of dC/dv after swapping roles
        if i2.size or i3.size:
            a = np.concatenate([uu[i2], ul[i2], vu[i3], vl[i3]])
            b = np.concatenate([vu[i2], vu[i2], uu[i3], uu[i3]])
            self._cond = (a, b, i2.size, i3.size)
        else:
            self._cond = None
        self._rect = (ul[i1], uu[i1], vl[i1], vu[i1]) if i1.size else None

    def __call__(self, spec: CopulaSpec) -> float:
        total = 0.0
        if self._dens is not None:
            total += float(np.sum(np.maximum(spec.logpdf(*self._dens), LOG_FLOOR)))
        if self._cond is not None:
            a, b, m2, m3 = self._cond
            h = spec.dC_dv(a, b)
            diff = np.concatenate([h[:m2] - h[m2:2 * m2], h[2 * m2:2 * m2 + m3] - h[2 * m2 + m3:]])
            total += float(np.sum(np.log(np.maximum(diff, FLOOR))))
        if self._rect is not None:
            total += float(np.sum(np.log(np.maximum(_rectangle(spec, *self._rect), FLOOR))))
        return total


class DensityLikelihood:
    """Classical pseudo-log-likelihood of untied points."""

    def __init__(self, points: np.ndarray):
        points = np.asarray(points, dtype=float)
        self.n = points.shape[0]
        self._u = points[:, 0]
        self._v = points[:, 1]

    def __call__(self, spec: CopulaSpec) -> float:
        return float(np.sum(np.maximum(spec.logpdf(self._u, self._v), LOG_FLOOR)))


def log_pseudo_likelihood(spec: CopulaSpec, data: CensoredPseudoSample) -> float:
    return CensoredLikelihood(data)(spec)


def maximize(family, objective, method: Method, tau0: float | None = None) -> FitResult:
    """Maximise ``objective(spec)`` over the family's tau search interval."""
    family = Family.parse(family)
    lo, hi = TAU_SEARCH_BOUNDS[family]

    def neg(tau):
        val = objective(CopulaSpec(family, tau_to_theta(family, tau)))
        return -val if math.isfinite(val) else math.inf

    def run(a, b):
        return minimize_scalar(neg, bounds=(a, b), method="bounded",
                               options={"xatol": TAU_XTOL, "maxiter": MAX_ITER})

    res = None
    nfev = 0
    if tau0 is not None:
        a, b = max(lo, tau0 - 0.2), min(hi, tau0 + 0.2)
        res = run(a, b)
        nfev += res.nfev
        edge = (res.x - a < _BOUNDARY_MARGIN and a > lo) or (b - res.x < _BOUNDARY_MARGIN and b < hi)
        if edge:
            res = None
    if res is None:
        res = run(lo, hi)
        nfev += res.nfev
    tau_hat = float(res.x)
    at_bound = tau_hat - lo < _BOUNDARY_MARGIN or hi - tau_hat < _BOUNDARY_MARGIN
    theta_hat = tau_to_theta(family, tau_hat)
    return FitResult(
        family=family,
        theta_hat=theta_hat,
        tau_hat=theta_to_tau(family, theta_hat),
        loglik=-float(res.fun),
        iterations=int(nfev),
        converged=bool(res.success) and not at_bound and math.isfinite(res.fun),
        method=method,
    )


def _check_size(n: int) -> None:
    if n < MIN_FIT_SIZE:
        raise ValueError(f"need at least {MIN_FIT_SIZE} observations to fit, got {n}")


def fit_censoring(family, data: CensoredPseudoSample | RawSample, tau0: float | None = None) -> FitResult:
    if isinstance(data, RawSample):
        data = censor(data)
    _check_size(data.n)
    data.check_informative()
    return maximize(family, CensoredLikelihood(data), Method.CENSORING, tau0)


def fit_pseudo(family, points, tau0: float | None = None, method: Method = Method.CENSORING) -> FitResult:
    """Classical density-only MPLE on untied pseudo-observations."""
    return maximize(family, DensityLikelihood(points), method, tau0)


def fit_average_rank(family, sample: RawSample | CensoredPseudoSample, tau0: float | None = None) -> FitResult:
    if isinstance(sample, CensoredPseudoSample):
        data = sample
        n = data.n
        points = np.column_stack([
            (data.u_rank_up + data.u_rank_lo) / 2.0 / (n + 1),
            (data.v_rank_up + data.v_rank_lo) / 2.0 / (n + 1),
        ])
    else:
        data = censor(sample)
        points = mid_rank_observations(sample)
    _check_size(data.n)
    data.check_informative()
    return fit_pseudo(family, points, tau0, Method.AVERAGE_RANK)


def random_break_observations(sample: RawSample, rng: np.random.Generator) -> np.ndarray:
    """Pseudo-observations with every tie block randomly permuted."""
    n = sample.n
    cols = []
    for values in (sample.x, sample.y):
        order = np.lexsort((rng.random(n), values))
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(1, n + 1)
        cols.append(ranks / (n + 1))
    return np.column_stack(cols)


def fit_random_break(family, sample: RawSample, m: int = 100, rng=None, tau0: float | None = None) -> FitResult:
    """Mean over ``m`` random tie-breakings of the classical MPLE (averaged on the theta scale)."""
    if m < 1:
        raise ValueError("number of randomisations must be at least 1")
    family = Family.parse(family)
    data = censor(sample)
    _check_size(data.n)
    data.check_informative()
    rng = as_generator(rng)
    if not data.has_ties:
        m = 1
    fits = [fit_pseudo(family, random_break_observations(sample, rng), tau0) for _ in range(m)]
    theta = float(np.mean([f.theta_hat for f in fits]))
    return FitResult(
        family=family,
        theta_hat=theta,
        tau_hat=theta_to_tau(family, theta),
        loglik=float(np.mean([f.loglik for f in fits])),
        iterations=sum(f.iterations for f in fits),
        converged=all(f.converged for f in fits),
        method=Method.RANDOM_BREAK,
    )


def fit(family, sample: RawSample, method: Method | str = Method.CENSORING, *, m: int = 100,
        rng=None, tau0: float | None = None) -> FitResult:
    method = Method(method)
    if method is Method.CENSORING:
        return fit_censoring(family, sample, tau0)
    if method is Method.AVERAGE_RANK:
        return fit_average_rank(family, sample, tau0)
    return fit_random_break(family, sample, m, rng, tau0)
