import math

import mpmath as mp
import numpy as np
import pytest

from tiecopula.normal import bvn_cdf


def _oracle(x, y, r):
    # P(X <= x, Y <= y) as a 1-D integral, split where the inner CDF jumps
    mp.mp.dps = 30
    s = mp.sqrt(1 - r * r)
    breaks = sorted(p for p in {0.0, y / r if r else 0.0} if p < x)
    return float(mp.quad(lambda t: mp.npdf(t) * mp.ncdf((y - r * t) / s), [-mp.inf, *breaks, x]))


@pytest.mark.parametrize("rho", [-0.999, -0.95, -0.925, -0.8, -0.5, -0.1, 0.0, 0.2, 0.6, 0.9, 0.93, 0.99, 0.999])
def test_bvn_matches_quadrature(rho):
    rng = np.random.default_rng(int(1000 * (rho + 1)))
    pts = rng.uniform(-4, 4, size=(8, 2))
    got = bvn_cdf(pts[:, 0], pts[:, 1], rho)
    want = [_oracle(x, y, rho) for x, y in pts]
    np.testing.assert_allclose(got, want, atol=5e-8, rtol=0)


@pytest.mark.parametrize("rho", [-0.7, 0.0, 0.3, 0.95])
def test_bvn_orthant_closed_form(rho):
    assert bvn_cdf(0.0, 0.0, rho) == pytest.approx(0.25 + math.asin(rho) / (2 * math.pi), abs=1e-14)


def test_bvn_infinite_arguments():
    assert bvn_cdf(np.inf, 0.3, 0.5) == pytest.approx(0.617911422188953, abs=1e-12)
    assert bvn_cdf(-np.inf, 0.3, 0.5) == 0.0


def test_bvn_rejects_degenerate_correlation():
    with pytest.raises(ValueError):
        bvn_cdf(0.0, 0.0, 1.0)
