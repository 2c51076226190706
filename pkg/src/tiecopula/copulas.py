"""One-parameter bivariate copula families indexed by Kendall's tau.

All evaluation methods are vectorised over ``u`` and ``v`` and return a
plain float when both inputs are scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .normal import bvn_cdf, norm_cdf, norm_ppf


class CopulaDomainError(ValueError):
    """Raised for parameters or evaluation points outside a family's domain."""


class Family(str, Enum):
    CLAYTON = "clayton"
    SURVIVAL_CLAYTON = "survival-clayton"
    GUMBEL = "gumbel"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = str(name).strip().lower().replace("_", "-")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown copula family {name!r}; choose from {choices}") from None

    @property
    def short(self) -> str:
        return _SHORT[self]


_ALIASES = {
    "c": "clayton",
    "sc": "survival-clayton",
    "survival": "survival-clayton",
    "rotated-clayton": "survival-clayton",
    "g": "gumbel",
    "n": "gaussian",
    "normal": "gaussian",
}
_SHORT = {
    Family.CLAYTON: "C",
    Family.SURVIVAL_CLAYTON: "SC",
    Family.GUMBEL: "G",
    Family.GAUSSIAN: "N",
}

# Search domain on the tau scale used by the estimators.
TAU_SEARCH_BOUNDS = {
    Family.CLAYTON: (0.001, 0.999),
    Family.SURVIVAL_CLAYTON: (0.001, 0.999),
    Family.GUMBEL: (0.001, 0.999),
    Family.GAUSSIAN: (-0.999, 0.999),
}


def _check_tau(family: Family, tau: float) -> None:
    if family is Family.GAUSSIAN:
        ok = -1.0 < tau < 1.0
    elif family is Family.GUMBEL:
        ok = 0.0 <= tau < 1.0
    else:
        ok = 0.0 < tau < 1.0
    if not ok:
        raise CopulaDomainError(f"Kendall's tau {tau} outside the range of the {family.value} family")


def tau_to_theta(family: "Family | str", tau: float) -> float:
    family = Family.parse(family)
    tau = float(tau)
    _check_tau(family, tau)
    if family is Family.GAUSSIAN:
        return math.sin(math.pi * tau / 2.0)
    if family is Family.GUMBEL:
        return 1.0 / (1.0 - tau)
    return 2.0 * tau / (1.0 - tau)


def theta_to_tau(family: "Family | str", theta: float) -> float:
    family = Family.parse(family)
    theta = float(theta)
    _check_theta(family, theta)
    if family is Family.GAUSSIAN:
        return 2.0 * math.asin(theta) / math.pi
    if family is Family.GUMBEL:
        return 1.0 - 1.0 / theta
    return theta / (theta + 2.0)


def _check_theta(family: Family, theta: float) -> None:
    if not math.isfinite(theta):
        raise CopulaDomainError(f"parameter must be finite, got {theta}")
    if family is Family.GAUSSIAN:
        ok = -1.0 < theta < 1.0
    elif family is Family.GUMBEL:
        ok = theta >= 1.0
    else:
        ok = theta > 0.0
    if not ok:
        raise CopulaDomainError(f"parameter {theta} not admissible for the {family.value} family")


# ---------------------------------------------------------------------------
# Clayton: C(u, v) = (u^-t + v^-t - 1)^(-1/t)


def _clayton_logA(lu, lv, theta):
    # log(u^-t + v^-t - 1), stable for both tiny and huge t
    a = -theta * lu
    b = -theta * lv
    m = np.maximum(a, b)
    with np.errstate(over="ignore", invalid="ignore"):
        small = np.log1p(np.expm1(a) + np.expm1(b))
        large = m + np.log1p(np.exp(np.minimum(a, b) - m) - np.exp(-m))
    return np.where(m < 30.0, small, large)


def _clayton_cdf(u, v, theta):
    lu, lv = np.log(u), np.log(v)
    return np.exp(-_clayton_logA(lu, lv, theta) / theta)


def _clayton_h(u, v, theta):
    # dC/du
    lu, lv = np.log(u), np.log(v)
    logA = _clayton_logA(lu, lv, theta)
    return np.exp(-(theta + 1.0) * lu - (1.0 + 1.0 / theta) * logA)


def _clayton_logpdf(u, v, theta):
    lu, lv = np.log(u), np.log(v)
    logA = _clayton_logA(lu, lv, theta)
    return math.log1p(theta) - (theta + 1.0) * (lu + lv) - (1.0 / theta + 2.0) * logA


def _clayton_sample(n, theta, rng):
    shape = 1.0 / theta
    # log of a Gamma(shape) draw without underflow for tiny shapes
    log_frailty = np.log(rng.gamma(shape + 1.0, size=n)) + np.log(rng.uniform(size=n)) / shape
    e = rng.exponential(size=(n, 2))
    z = np.log(e) - log_frailty[:, None]
    return np.exp(-np.logaddexp(0.0, z) / theta)


# ---------------------------------------------------------------------------
# Gumbel: C(u, v) = exp(-((-log u)^t + (-log v)^t)^(1/t))


def _gumbel_A(x, y, theta):
    hi = np.maximum(x, y)
    lo = np.minimum(x, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(hi > 0, lo / hi, 0.0)
    return hi * np.exp(np.log1p(ratio**theta) / theta)


def _gumbel_cdf(u, v, theta):
    return np.exp(-_gumbel_A(-np.log(u), -np.log(v), theta))


def _gumbel_h(u, v, theta):
    x, y = -np.log(u), -np.log(v)
    A = _gumbel_A(x, y, theta)
    return np.exp(-A + (theta - 1.0) * (np.log(x) - np.log(A)) + x)


def _gumbel_logpdf(u, v, theta):
    x, y = -np.log(u), -np.log(v)
    A = _gumbel_A(x, y, theta)
    lx, ly = np.log(x), np.log(y)
    return (
        -A
        + x
        + y
        + (theta - 1.0) * (lx + ly)
        + (1.0 - 2.0 * theta) * np.log(A)
        + np.log(A + theta - 1.0)
    )


def _gumbel_sample(n, theta, rng):
    alpha = 1.0 / theta
    w = rng.uniform(0.0, math.pi, size=n)
    e0 = rng.exponential(size=n)
    # log of a positive stable frailty with Laplace transform exp(-s^alpha)
    if alpha == 1.0:
        log_stable = np.zeros(n)
    else:
        log_stable = (
            np.log(np.sin(alpha * w))
            - theta * np.log(np.sin(w))
            + (theta - 1.0) * (np.log(np.sin((1.0 - alpha) * w)) - np.log(e0))
        )
    e = rng.exponential(size=(n, 2))
    return np.exp(-np.exp(alpha * (np.log(e) - log_stable[:, None])))


# ---------------------------------------------------------------------------
# Gaussian


def _gauss_cdf(u, v, rho):
    return bvn_cdf(norm_ppf(u), norm_ppf(v), rho)


def _gauss_h(u, v, rho):
    x, y = norm_ppf(u), norm_ppf(v)
    return norm_cdf((y - rho * x) / math.sqrt(1.0 - rho * rho))


def _gauss_logpdf(u, v, rho):
    x, y = norm_ppf(u), norm_ppf(v)
    s2 = 1.0 - rho * rho
    return -0.5 * math.log(s2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * s2)


def _gauss_sample(n, rho, rng):
    z = rng.standard_normal(size=(n, 2))
    z[:, 1] = rho * z[:, 0] + math.sqrt(1.0 - rho * rho) * z[:, 1]
    return norm_cdf(z)


_BASE = {
    Family.CLAYTON: (_clayton_cdf, _clayton_h, _clayton_logpdf, _clayton_sample),
    Family.GUMBEL: (_gumbel_cdf, _gumbel_h, _gumbel_logpdf, _gumbel_sample),
    Family.GAUSSIAN: (_gauss_cdf, _gauss_h, _gauss_logpdf, _gauss_sample),
}


def _as_arrays(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    scalar = u.ndim == 0 and v.ndim == 0
    u, v = np.broadcast_arrays(np.atleast_1d(u), np.atleast_1d(v))
    return u, v, scalar


def _result(x, scalar):
    return float(x[0]) if scalar else x


def _require_interior(u, v):
    if not (np.all((u > 0) & (u < 1)) and np.all((v > 0) & (v < 1))):
        raise CopulaDomainError("evaluation point must lie strictly inside the unit square")


@dataclass(frozen=True)
class CopulaSpec:
    """A member of one of the supported families with parameter ``theta``.

    ``theta`` is the Clayton/Gumbel dependence parameter or, for the
    Gaussian family, the correlation. The survival Clayton copula is the
    180 degree rotation ``u + v - 1 + C(1 - u, 1 - v)``.
    """

    family: Family
    theta: float

    def __post_init__(self):
        family = Family.parse(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "theta", float(self.theta))
        _check_theta(family, self.theta)

    @classmethod
    def from_tau(cls, family: "Family | str", tau: float) -> "CopulaSpec":
        family = Family.parse(family)
        return cls(family, tau_to_theta(family, tau))

    @property
    def tau(self) -> float:
        return theta_to_tau(self.family, self.theta)

    @property
    def _rotated(self) -> bool:
        return self.family is Family.SURVIVAL_CLAYTON

    @property
    def _impl(self):
        return _BASE[Family.CLAYTON if self._rotated else self.family]

    def cdf(self, u, v):
        u, v, scalar = _as_arrays(u, v)
        if np.any((u < 0) | (u > 1) | (v < 0) | (v > 1)):
            raise CopulaDomainError("evaluation point must lie in the closed unit square")
        base_cdf = self._impl[0]
        inner = (u > 0) & (u < 1) & (v > 0) & (v < 1)
        out = np.where((u > 0) & (v > 0), np.minimum(u, v), 0.0)
        if inner.any():
            ui, vi = u[inner], v[inner]
            if self._rotated:
                val = ui + vi - 1.0 + base_cdf(1.0 - ui, 1.0 - vi, self.theta)
            else:
                val = base_cdf(ui, vi, self.theta)
            out[inner] = np.clip(val, np.maximum(ui + vi - 1.0, 0.0), np.minimum(ui, vi))
        return _result(out, scalar)

    def logpdf(self, u, v):
        u, v, scalar = _as_arrays(u, v)
        _require_interior(u, v)
        base_logpdf = self._impl[2]
        if self._rotated:
            u, v = 1.0 - u, 1.0 - v
        return _result(base_logpdf(u, v, self.theta), scalar)

    def pdf(self, u, v):
        out = np.exp(self.logpdf(u, v))
        return out if isinstance(out, np.ndarray) else float(out)

    def dC_du(self, u, v):
        """Conditional distribution of V given U = u, evaluated at v."""
        u, v, scalar = _as_arrays(u, v)
        _require_interior(u, v)
        h = self._impl[1]
        if self._rotated:
            out = 1.0 - h(1.0 - u, 1.0 - v, self.theta)
        else:
            out = h(u, v, self.theta)
        return _result(np.clip(out, 0.0, 1.0), scalar)

    def dC_dv(self, u, v):
        """Conditional distribution of U given V = v, evaluated at u."""
        # every supported family is exchangeable
        return self.dC_du(v, u)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` pairs as an ``(n, 2)`` array."""
        if n < 1:
            raise ValueError("sample size must be at least 1")
        pairs = self._impl[3](int(n), self.theta, rng)
        return 1.0 - pairs if self._rotated else pairs
