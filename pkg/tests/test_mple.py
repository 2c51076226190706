import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from tiecopula.copulas import CopulaSpec
from tiecopula.mple import (
    Method,
    fit,
    fit_average_rank,
    fit_censoring,
    fit_pseudo,
    fit_random_break,
    likelihood_contribution,
    likelihood_contributions,
    log_pseudo_likelihood,
    random_break_observations,
)
from tiecopula.ranks import Case, DegenerateDataError, RawSample, censor

# obs 2 has x in the rank block 3..5 and y in the block 2..4
RECT = RawSample([1, 2, 3, 3, 3, 4, 5, 6, 7], [1, 2, 2, 2, 3, 4, 5, 6, 7])
# obs 2 has x in the block 3..5 and an untied y of rank 6
STRIP = RawSample([1, 2, 3, 3, 3, 4, 5, 6, 7], [1, 2, 6, 3, 4, 5, 7, 8, 9])
# all four censoring patterns
MIXED = RawSample([1, 2, 3, 3, 3, 4, 5, 5, 6, 7], [2, 1, 4, 3, 3, 5, 5, 6, 7, 8])


def test_independence_rectangle():
    data = censor(RECT)
    assert data.case[2] == Case.BOTH_TIED
    assert (data.u_lo[2], data.u_up[2], data.v_lo[2], data.v_up[2]) == (0.3, 0.5, 0.2, 0.4)
    assert likelihood_contribution(CopulaSpec("gumbel", 1.0), data, 2) == pytest.approx(0.04, abs=1e-15)


def test_independence_strip():
    data = censor(STRIP)
    assert data.case[2] == Case.X_TIED
    assert data.v_up[2] == 0.6
    assert likelihood_contribution(CopulaSpec("gumbel", 1.0), data, 2) == pytest.approx(0.2, abs=1e-15)


def test_clayton_rectangle_against_quadrature():
    # 40-digit mpmath integral of the mixed derivative over [0.3, 0.5] x [0.2, 0.4]
    want = 0.061353230215905808337
    got = likelihood_contribution(CopulaSpec("clayton", 2.0), censor(RECT), 2)
    assert got == pytest.approx(want, rel=1e-12)
    c = CopulaSpec("clayton", 2.0)
    quad, _ = integrate.dblquad(lambda v, u: c.pdf(u, v), 0.3, 0.5, 0.2, 0.4, epsabs=1e-12, epsrel=1e-10)
    assert got == pytest.approx(quad, rel=1e-8)


def _mp_clayton_loglik(theta, data):
    """Independent high-precision evaluation of the four cases for Clayton."""
    mp.mp.dps = 30
    th = mp.mpf(theta)

    def C(u, v):
        return (u**-th + v**-th - 1) ** (-1 / th)

    total = mp.mpf(0)
    for i in range(data.n):
        uu, ul = mp.mpf(int(data.u_rank_up[i])) / (data.n + 1), mp.mpf(int(data.u_rank_lo[i])) / (data.n + 1)
        vu, vl = mp.mpf(int(data.v_rank_up[i])) / (data.n + 1), mp.mpf(int(data.v_rank_lo[i])) / (data.n + 1)
        if ul < uu and vl < vu:
            li = C(uu, vu) - C(uu, vl) - C(ul, vu) + C(ul, vl)
        elif ul < uu:
            li = mp.diff(lambda t: C(uu, t), vu) - mp.diff(lambda t: C(ul, t), vu)
        elif vl < vu:
            li = mp.diff(lambda s: C(s, vu), uu) - mp.diff(lambda s: C(s, vl), uu)
        else:
            li = mp.diff(C, (uu, vu), (1, 1))
        total += mp.log(li)
    return float(total)


def test_mixed_toy_matches_independent_implementation():
    data = censor(MIXED)
    assert set(data.case) == {Case.BOTH_TIED, Case.X_TIED, Case.Y_TIED, Case.NO_TIES}
    got = log_pseudo_likelihood(CopulaSpec("clayton", 2.0), data)
    assert got == pytest.approx(_mp_clayton_loglik(2.0, data), abs=1e-10)


@pytest.mark.parametrize("family", ["clayton", "gumbel", "gaussian", "survival-clayton"])
def test_untied_reduces_to_density(family, rng):
    pairs = CopulaSpec.from_tau(family, 0.4).sample(60, rng)
    data = censor(RawSample.from_pairs(pairs))
    spec = CopulaSpec.from_tau(family, 0.3)
    want = float(np.sum(np.log(spec.pdf(data.u_up, data.v_up))))
    assert log_pseudo_likelihood(spec, data) == pytest.approx(want, rel=1e-13)


def test_independence_untied_is_zero(rng):
    data = censor(RawSample(rng.random(30), rng.random(30)))
    assert log_pseudo_likelihood(CopulaSpec("gumbel", 1.0), data) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("family", ["clayton", "gumbel", "gaussian"])
def test_contributions_sum_to_loglik(family):
    data = censor(MIXED)
    spec = CopulaSpec.from_tau(family, 0.6)
    assert np.sum(np.log(likelihood_contributions(spec, data))) == pytest.approx(
        log_pseudo_likelihood(spec, data), rel=1e-12)


@settings(max_examples=25)
@given(seed=st.integers(0, 10_000), tau=st.floats(0.05, 0.9))
def test_loglik_permutation_invariant(seed, tau):
    rng = np.random.default_rng(seed)
    pairs = CopulaSpec.from_tau("gumbel", 0.5).sample(40, rng)
    raw = RawSample(np.round(pairs[:, 0], 1), pairs[:, 1])
    perm = rng.permutation(40)
    spec = CopulaSpec.from_tau("clayton", tau)
    a = log_pseudo_likelihood(spec, censor(raw))
    b = log_pseudo_likelihood(spec, censor(RawSample(raw.x[perm], raw.y[perm])))
    assert a == pytest.approx(b, rel=1e-12)


def test_fit_recovers_tau_untied(rng):
    pairs = CopulaSpec.from_tau("gumbel", 0.5).sample(400, rng)
    res = fit_censoring("gumbel", RawSample.from_pairs(pairs))
    assert res.converged
    assert res.tau_hat == pytest.approx(0.5, abs=0.08)
    assert res.tau_hat == pytest.approx(res.spec.tau, abs=1e-15)
    assert res.method is Method.CENSORING


@pytest.mark.parametrize("family", ["clayton", "gumbel", "gaussian"])
def test_reduction_property(family, rng):
    raw = RawSample.from_pairs(CopulaSpec.from_tau(family, 0.6).sample(150, rng))
    censored = fit_censoring(family, raw)
    classical = fit_pseudo(family, censor(raw).points())
    assert abs(censored.tau_hat - classical.tau_hat) < 1e-8
    assert fit_average_rank(family, raw).tau_hat == pytest.approx(censored.tau_hat, abs=1e-8)
    assert fit_random_break(family, raw, m=5, rng=1).tau_hat == pytest.approx(censored.tau_hat, abs=1e-8)


def test_random_break_permutes_tie_blocks(toy_sample):
    rng = np.random.default_rng(5)
    seen = set()
    for _ in range(50):
        u = random_break_observations(toy_sample, rng)[:, 0]
        block = np.sort(u[toy_sample.x == 3.0])
        np.testing.assert_array_equal(block, np.array([3, 4, 5]) / 10)
        np.testing.assert_array_equal(np.sort(u[toy_sample.x == 5.0]), np.array([7, 8]) / 10)
        seen.add(tuple(u[toy_sample.x == 3.0]))
    assert len(seen) == 6


def test_fits_invariant_under_monotone_transform(rng):
    pairs = CopulaSpec.from_tau("gumbel", 0.6).sample(80, rng)
    raw = RawSample(np.round(pairs[:, 0], 1), pairs[:, 1])
    moved = RawSample(np.exp(3 * raw.x) - 7, np.log(raw.y) * 2)
    for method in Method:
        a = fit("gumbel", raw, method, m=10, rng=np.random.default_rng(9))
        b = fit("gumbel", moved, method, m=10, rng=np.random.default_rng(9))
        assert a == b


def test_fit_errors():
    with pytest.raises(DegenerateDataError):
        fit_censoring("clayton", RawSample([1.0] * 12, np.arange(12.0)))
    with pytest.raises(ValueError):
        fit_censoring("clayton", RawSample(np.arange(5.0), np.arange(5.0)))
    with pytest.raises(ValueError):
        fit_random_break("clayton", RawSample(np.arange(12.0), np.arange(12.0)), m=0)


def test_boundary_fit_flagged(rng):
    x = rng.random(100)
    res = fit_censoring("clayton", RawSample(x, 1 - x + 0.01 * rng.random(100)))
    assert not res.converged
    assert res.tau_hat == pytest.approx(0.001, abs=1e-5)


def test_start_value_gives_same_optimum(rng):
    raw = RawSample.from_pairs(CopulaSpec.from_tau("gaussian", 0.3).sample(120, rng))
    a = fit_censoring("gaussian", raw)
    b = fit_censoring("gaussian", raw, tau0=0.25)
    assert b.tau_hat == pytest.approx(a.tau_hat, abs=1e-6)
    c = fit_censoring("gaussian", raw, tau0=-0.8)
    assert c.tau_hat == pytest.approx(a.tau_hat, abs=1e-6)


def test_tied_both_margins_fit(rng):
    pairs = CopulaSpec.from_tau("gaussian", 0.5).sample(200, rng)
    raw = RawSample(np.round(pairs[:, 0], 1), np.round(pairs[:, 1], 1))
    res = fit_censoring("gaussian", raw)
    assert res.converged and math.isfinite(res.loglik)
    assert res.tau_hat == pytest.approx(0.5, abs=0.12)
