import math
import numpy as np
import pytest
from qisim.controller import build_schedule
from qisim.counting import (
    CountSampler,
    joint_likelihood,
    likelihood_params,
    log_p_b_pmf,
    p_b_pmf,
    p_b_pmf_table,
    p_b_support,
    p_e_pmf,
    p_e_pmf_table,
    p_e_support,
    sample_trajectory,
)
from qisim.enums import MuTotalLaw
from qisim.models import BeliefState, CountRecord, ScenarioParams


class FixedSqueezeController:
    """Replays a fixed squeeze schedule and never updates its belief"""

    def __init__(self, squeezes):
        self.squeezes = list(squeezes)

    def squeeze(self, k):
        return self.squeezes[k]

    def observe(self, record):
        return BeliefState(0.5, 0.5, 0, record.k + 1)

    def decision(self):
        return 0


@pytest.mark.parametrize("x, nbar", [(1.6, 4e-6), (0.3, 0.5), (12.0, 2.0), (0.0, 0.7)])
def test_p_b_normalised_with_right_mean(x, nbar):
    """Tests the Laguerre law sums to one with mean x + nbar"""
    table = p_b_pmf_table(p_b_support(x, nbar), x, nbar)
    assert table.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.arange(len(table)) @ table == pytest.approx(x + nbar, rel=1e-10)


def test_p_b_thermal_limit():
    """Tests x = 0 is the Bose-Einstein law"""
    nbar = 0.25
    for n in range(6):
        assert p_b_pmf(n, 0.0, nbar) == pytest.approx(nbar**n / (1.0 + nbar) ** (n + 1), rel=1e-12)


def test_p_b_poisson_limit():
    """Tests a vanishing thermal mean recovers Poisson(x)"""
    x = 1.6
    for n in range(8):
        poisson = math.exp(-x) * x**n / math.factorial(n)
        assert p_b_pmf(n, x, 1e-12) == pytest.approx(poisson, rel=1e-6)
        assert p_b_pmf(n, x, 0.0) == pytest.approx(poisson, rel=1e-12)


def test_p_b_table_matches_pointwise():
    table = p_b_pmf_table(30, 3.2, 0.4)
    for n in (0, 1, 7, 30):
        assert table[n] == pytest.approx(p_b_pmf(n, 3.2, 0.4), rel=1e-12)


def test_p_b_stable_far_out():
    """Tests the recurrence stays finite and non-negative at large x and n"""
    table = p_b_pmf_table(10_000, 1000.0, 0.5)
    assert np.all(np.isfinite(table))
    assert np.all(table >= 0.0)
    assert table.sum() == pytest.approx(1.0, abs=1e-9)
    assert math.isfinite(log_p_b_pmf(10_000, 1000.0, 0.5))


def test_p_b_rejects_negative_mean():
    with pytest.raises(ValueError):
        p_b_pmf(0, -1.0, 0.1)


@pytest.mark.parametrize("M, e", [(10**7, 1e-7), (10**9, 2e-9), (3, 0.4), (1, 0.0)])
def test_p_e_normalised_with_right_mean(M, e):
    """Tests the negative binomial sums to one with mean M e"""
    table = p_e_pmf_table(p_e_support(M, e), M, e)
    assert table.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.arange(len(table)) @ table == pytest.approx(M * e, rel=1e-10, abs=1e-15)


def test_p_e_single_mode_is_thermal():
    e = 0.3
    for n in range(5):
        assert p_e_pmf(n, 1, e) == pytest.approx(e**n / (1.0 + e) ** (n + 1), rel=1e-12)


def test_p_e_table_matches_pointwise():
    table = p_e_pmf_table(20, 10**7, 3e-7)
    for n in (0, 3, 20):
        assert table[n] == pytest.approx(p_e_pmf(n, 10**7, 3e-7), rel=1e-10)


def test_joint_likelihood_is_sum_of_marginals(reference_params):
    schedule = build_schedule(reference_params)
    params = likelihood_params(schedule, reference_params, 3, 1, 0.0)
    record = CountRecord(N_b=1, N_E=2, k=3)
    expected = math.log(p_b_pmf(1, params.coherent_mean, params.thermal_mean)) + math.log(
        p_e_pmf(2, params.modes, params.e_per_mode)
    )
    assert joint_likelihood(record, params) == pytest.approx(expected, rel=1e-12)


def test_likelihood_params_residuals(reference_params):
    """Tests residual j lambda_k - r_k sets both count laws"""
    schedule = build_schedule(reference_params)
    lam = schedule.lambdas[2]
    params = likelihood_params(schedule, reference_params, 2, 1, 0.25 * lam)
    assert params.e_per_mode == pytest.approx((0.75 * lam) ** 2)
    assert params.coherent_mean == pytest.approx(reference_params.M * (0.75 * lam) ** 2)
    assert params.thermal_mean == pytest.approx(reference_params.b_thermal_mean)
    absent = likelihood_params(schedule, reference_params, 2, 0, 0.25 * lam, thermal_mean=0.0)
    assert absent.e_per_mode == pytest.approx((0.25 * lam) ** 2)
    assert absent.thermal_mean == 0.0


def test_perfect_nulling_gives_no_counts(reference_params, rng):
    """Tests r_k = lambda_k under presence and no thermal light leaves every cycle dark"""
    schedule = build_schedule(reference_params)
    controller = FixedSqueezeController(schedule.lambdas)
    trajectory = sample_trajectory(reference_params, 1, controller, rng, thermal_mean=0.0)
    assert len(trajectory) == schedule.K
    assert trajectory.total_counts == 0


def test_e_marginals_follow_negative_binomial(rng, quiet_regime):
    """Tests the correlated sampler's N_E marginals against the negative binomial"""
    params = ScenarioParams(K=5)
    schedule = build_schedule(params)
    trials = 20_000
    counts = np.zeros((trials, schedule.K), dtype=int)
    controller = FixedSqueezeController([0.0] * schedule.K)
    for trial in range(trials):
        trajectory = sample_trajectory(params, 1, controller, rng, thermal_mean=0.0)
        counts[trial] = [cycle.N_E for cycle in trajectory.cycles]

    for k in range(schedule.K):
        e = schedule.lambdas[k] ** 2
        support = p_e_support(params.M, e)
        expected = p_e_pmf_table(support, params.M, e)
        observed = np.bincount(np.minimum(counts[:, k], support), minlength=support + 1) / trials
        assert 0.5 * np.abs(observed - expected).sum() <= 0.02


def test_e_means_scale_with_residual(rng, quiet_regime):
    """Tests E[N_E^(k)] / E[N_E^(0)] = (a_k / a_0)^2"""
    params = ScenarioParams(M=10**9, K=4)
    schedule = build_schedule(params)
    trials = 20_000
    totals = np.zeros(schedule.K)
    controller = FixedSqueezeController([0.0] * schedule.K)
    for _ in range(trials):
        trajectory = sample_trajectory(params, 1, controller, rng, thermal_mean=0.0)
        totals += [cycle.N_E for cycle in trajectory.cycles]
    ratios = totals / totals[0]
    expected = schedule.lambdas**2 / schedule.lambdas[0] ** 2
    np.testing.assert_allclose(ratios, expected, rtol=0.05)


@pytest.mark.parametrize("law", [MuTotalLaw.GAUSSIAN, MuTotalLaw.GAMMA])
def test_e_counts_share_intensity(rng, quiet_regime, law):
    """Tests N_E of different cycles are positively correlated through mu_tot"""
    params = ScenarioParams(M=4, K=2)
    controller = FixedSqueezeController([-0.5, -0.5])
    first, second = [], []
    for _ in range(20_000):
        trajectory = sample_trajectory(params, 0, controller, rng, thermal_mean=0.0, law=law)
        first.append(trajectory.cycles[0].N_E)
        second.append(trajectory.cycles[1].N_E)
    assert np.cov(first, second)[0, 1] > 0.1


def test_sampler_falls_back_without_anchor(reference_params, rng):
    """Tests a zero first residual leaves later cycles independent negative binomials"""
    sampler = CountSampler(reference_params, rng, thermal_mean=0.0)
    sampler.anchor_on(0.0)
    assert sampler.mu_total is None
    assert sampler.draw_e(0.0) == 0
    assert sampler.draw_b(0.0) == 0
