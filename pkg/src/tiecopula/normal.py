"""Univariate and bivariate standard normal distribution functions.

The bivariate CDF follows the Drezner-Wesolowsky single-integral
representation with the Gauss-Legendre rules and the high-correlation
expansion popularised by Genz (2004), giving roughly double precision.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr, ndtri

TWOPI = 2.0 * math.pi

# Half of each symmetric Gauss-Legendre rule; nodes are in (0, 1).
_RULES = {}
for _npts in (6, 12, 20):
    _x, _w = np.polynomial.legendre.leggauss(_npts)
    _keep = _x > 0
    _RULES[_npts] = (_x[_keep], _w[_keep])


def norm_cdf(x):
    return ndtr(x)


def norm_ppf(p):
    return ndtri(p)


def _bvn_upper(h, k, r: float):
    """P(X > h, Y > k) for a standard bivariate normal with correlation r."""
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    ar = abs(r)
    if ar < 0.3:
        x, w = _RULES[6]
    elif ar < 0.75:
        x, w = _RULES[12]
    else:
        x, w = _RULES[20]
    hk = h * k

    if ar < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = math.asin(r)
        total = np.zeros(np.broadcast(h, k).shape)
        for xi, wi in zip(x, w):
            for node in (1.0 + xi, 1.0 - xi):
                sn = math.sin(asr * node / 2.0)
                total = total + wi * np.exp((sn * hk - hs) / (1.0 - sn * sn))
        return total * asr / (2.0 * TWOPI) + ndtr(-h) * ndtr(-k)

    if r < 0:
        k = -k
        hk = -hk
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        a2 = (1.0 - r) * (1.0 + r)
        a = math.sqrt(a2)
        bs = (h - k) ** 2
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 16.0
        bvn = a * np.exp(-(bs / a2 + hk) / 2.0) * (
            1.0 - c * (bs - a2) * (1.0 - d * bs / 5.0) / 3.0 + c * d * a2 * a2 / 5.0
        )
        b = np.sqrt(bs)
        tail = (
            np.exp(-hk / 2.0)
            * math.sqrt(TWOPI)
            * ndtr(-b / a)
            * b
            * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0)
        )
        bvn = bvn - np.where(hk > -160.0, tail, 0.0)
        half = a / 2.0
        for xi, wi in zip(x, w):
            xs = (half * (1.0 + xi)) ** 2
            rs = math.sqrt(1.0 - xs)
            bvn = bvn + half * wi * (
                np.exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs
                - np.exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs))
            )
            xs = a2 * (1.0 - xi) ** 2 / 4.0
            rs = math.sqrt(1.0 - xs)
            bvn = bvn + half * wi * np.exp(-(bs / xs + hk) / 2.0) * (
                np.exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs
                - (1.0 + c * xs * (1.0 + d * xs))
            )
        bvn = -bvn / TWOPI
    if r > 0:
        return bvn + ndtr(-np.maximum(h, k))
    bvn = -bvn
    lower = np.where(h < 0, ndtr(k) - ndtr(h), ndtr(-h) - ndtr(-k))
    return bvn + np.where(k > h, lower, 0.0)


def bvn_cdf(x, y, rho: float):
    """P(X <= x, Y <= y) for standard normals with correlation ``rho``.

    Infinite arguments are handled by the usual marginal reductions.
    """
    if not -1.0 < rho < 1.0:
        raise ValueError(f"correlation must lie in (-1, 1), got {rho}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    out = np.empty(x.shape)
    fin = np.isfinite(x) & np.isfinite(y)
    if fin.any():
        out[fin] = _bvn_upper(-x[fin], -y[fin], rho)
    inf = ~fin
    if inf.any():
        xi, yi = x[inf], y[inf]
        val = np.where(xi == np.inf, ndtr(yi), np.where(yi == np.inf, ndtr(xi), 0.0))
        val = np.where((xi == -np.inf) | (yi == -np.inf), 0.0, val)
        out[inf] = val
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)
