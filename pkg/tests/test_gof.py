import numpy as np
import pytest

from tiecopula.copulas import CopulaSpec
from tiecopula.gof import cvm_statistic, empirical_copula, gof_test, p_value
from tiecopula.ranks import CensoredPseudoSample, RawSample, censor

# ranks giving the points (0.2, 0.2), (0.4, 0.8), (0.6, 0.4), (0.8, 0.6) at n = 4
FOUR = CensoredPseudoSample([1, 2, 3, 4], [1, 2, 3, 4], [1, 4, 2, 3], [1, 4, 2, 3])


def test_empirical_copula_examples():
    assert empirical_copula(FOUR, 0.5, 0.5) == 0.25
    assert empirical_copula(FOUR, 1.0, 1.0) == 1.0
    assert empirical_copula(FOUR, 0.0, 0.0) == 0.0
    np.testing.assert_array_equal(empirical_copula(FOUR, [0.5, 0.9], [0.9, 0.5]), [0.5, 0.5])


def test_cvm_against_brute_force():
    pts = [(0.2, 0.2), (0.4, 0.8), (0.6, 0.4), (0.8, 0.6)]
    want = 0.0
    for u, v in pts:
        cn = sum(1 for a, b in pts if a <= u and b <= v) / 4
        want += (cn - u * v) ** 2
    assert cvm_statistic(CopulaSpec("gumbel", 1.0), FOUR) == pytest.approx(want, abs=1e-15)


def test_cvm_is_integral_against_empirical_measure(rng):
    # the sum equals n times the integral of (C_n - C)^2 dC_n over the atoms
    for _ in range(50):
        n = int(rng.integers(10, 60))
        pairs = rng.random((n, 2))
        data = censor(RawSample(np.round(pairs[:, 0], 1), pairs[:, 1]))
        spec = CopulaSpec.from_tau("clayton", float(rng.uniform(0.1, 0.8)))
        cn = np.array([empirical_copula(data, u, v) for u, v in data.points()])
        integral = np.mean((cn - spec.cdf(data.u_up, data.v_up)) ** 2)
        assert cvm_statistic(spec, data) == pytest.approx(n * integral, abs=1e-12)


def test_statistic_orders_right_and_wrong_models(rng):
    good = bad = 0.0
    for _ in range(100):
        data = censor(RawSample.from_pairs(CopulaSpec.from_tau("gumbel", 0.75).sample(200, rng)))
        good += cvm_statistic(CopulaSpec.from_tau("gumbel", 0.75), data)
        bad += cvm_statistic(CopulaSpec.from_tau("clayton", 0.75), data)
    assert bad > 3 * good


def test_p_value_rules():
    assert p_value(0.5, [0.5, 0.7, 1.0]) == 1.0
    assert p_value(0.5, [0.1, 0.7, 0.2, 0.3]) == 0.25
    assert p_value(9.0, [0.1, 0.2]) == 0.0
    assert p_value(9.0, [0.1, 0.2], plus_one=True) == pytest.approx(1 / 3)


def test_gof_accepts_true_and_rejects_wrong(rng):
    pairs = CopulaSpec.from_tau("clayton", 0.6).sample(150, rng)
    data = censor(RawSample(np.round(pairs[:, 0], 1), pairs[:, 1]))
    right = gof_test("clayton", data, B=100, seed=4)
    wrong = gof_test("gumbel", data, B=100, seed=4)
    assert right.p_value > 0.05
    assert wrong.p_value < 0.05
    assert right.replicate_stats.size == 100 and right.bootstrap == "match"
    assert gof_test("clayton", data, B=100, seed=4).to_dict() == right.to_dict()


def test_gof_needs_enough_replicates():
    with pytest.raises(ValueError):
        gof_test("gumbel", censor(RawSample.from_pairs(np.random.default_rng(0).random((20, 2)))), B=10)
