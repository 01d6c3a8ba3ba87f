import math
import numpy as np
import pytest
from qisim.controller import build_schedule
from qisim.cycle import csi_trajectory, initial_moments, propagate_cycle, propagate_cycles
from qisim.exceptions import RegimeWarning
from qisim.models import ModePairMoments
from qisim.sfg import sfg_quarter_period_as_tms


def test_first_cycle_depletes_correlation(reference_params):
    """Tests C_out = C_p [1 - eta (1 + N_B)] = 9.5805e-4 after one unsqueezed cycle"""
    output = propagate_cycle(initial_moments(reference_params, 1), 0.0, reference_params, 1)
    assert output.out_moments.C_si == pytest.approx(reference_params.C_p * 0.958, rel=1e-12)
    assert output.out_moments.C_si == pytest.approx(9.5805e-4, rel=1e-4)


def test_forty_two_cycles(reference_params):
    """Tests C^(42) = C_p 0.958^42 ~ 1.648e-4"""
    assert csi_trajectory(reference_params, 1, 42) == pytest.approx(1.648e-4, rel=2e-3)
    outputs = propagate_cycles(reference_params, 1, [0.0] * 42)
    assert outputs[-1].out_moments.C_si == pytest.approx(
        csi_trajectory(reference_params, 1, 42), rel=1e-7
    )


def test_perfect_nulling(reference_params):
    """Tests r_k = sqrt(eta) C leaves no coherent sum-frequency light"""
    C = reference_params.C_p
    r = math.sqrt(reference_params.eta) * C
    output = propagate_cycle(initial_moments(reference_params, 1), r, reference_params, 1)
    assert output.r_effective == 0.0
    assert output.b_coherent_mean == 0.0
    assert output.e_mean_per_mode == 0.0


def test_absent_target_gives_only_thermal_light(reference_params):
    output = propagate_cycle(initial_moments(reference_params, 0), 0.0, reference_params, 0)
    assert output.out_moments.C_si == 0.0
    assert output.b_coherent_mean == 0.0
    assert output.b_thermal == pytest.approx(reference_params.b_thermal_mean, rel=1e-12)


@pytest.mark.parametrize("r_k", [-3e-5, 0.0, 2e-5, 4.47e-5])
def test_depletion_ignores_squeeze(reference_params, r_k):
    """Tests the correlation hand-off does not depend on r_k"""
    moments = initial_moments(reference_params, 1)
    reference = propagate_cycle(moments, 0.0, reference_params, 1)
    output = propagate_cycle(moments, r_k, reference_params, 1)
    assert output.out_moments.C_si == reference.out_moments.C_si
    assert output.out_moments.n_s == reference.out_moments.n_s


def test_sum_frequency_and_e_mode_photons_agree(reference_params):
    """Tests |b|^2 = M r~^2 so b and the E modes see the same residual"""
    output = propagate_cycle(initial_moments(reference_params, 1), 1e-5, reference_params, 1)
    assert output.b_coherent_mean == pytest.approx(
        reference_params.M * output.e_mean_per_mode, rel=1e-12
    )
    assert output.r_effective == pytest.approx(
        math.sqrt(reference_params.eta) * reference_params.C_p - 1e-5, rel=1e-12
    )


def test_matches_squeezed_quarter_period(reference_params):
    """Tests the cycle's b light against the SFG surrogate on the tapped, squeezed pair"""
    eta = reference_params.eta
    moments = initial_moments(reference_params, 1)
    r_k = 1.5e-5
    output = propagate_cycle(moments, r_k, reference_params, 1)
    tapped = ModePairMoments(
        n_s=eta * moments.n_s,
        n_i=moments.n_i,
        C_si=math.sqrt(eta) * moments.C_si - r_k,
    )
    _, amplitude, thermal = sfg_quarter_period_as_tms(tapped, reference_params.M)
    assert output.b_amp == pytest.approx(amplitude, rel=1e-12)
    assert output.b_thermal == pytest.approx(thermal, rel=1e-12)


def test_random_squeezes_follow_closed_form(reference_params, rng):
    """Tests k-fold propagation with arbitrary squeezes tracks h C_p q^k"""
    schedule = build_schedule(reference_params)
    squeezes = list(rng.uniform(-1.0, 1.0, size=schedule.K) * schedule.lambdas)
    outputs = propagate_cycles(reference_params, 1, squeezes)
    for k, output in enumerate(outputs):
        assert output.out_moments.C_si == pytest.approx(
            csi_trajectory(reference_params, 1, k + 1), rel=1e-7
        )


def test_lambda_matches_tapped_correlation(reference_params):
    schedule = build_schedule(reference_params)
    for k in (0, 1, 17, 41):
        assert math.sqrt(reference_params.eta) * csi_trajectory(reference_params, 1, k) == (
            pytest.approx(schedule.lambdas[k], rel=1e-14)
        )


def test_correlation_is_monotone(reference_params):
    values = [csi_trajectory(reference_params, 1, k) for k in range(43)]
    assert np.all(np.diff(values) < 0)


def test_non_finite_squeeze_is_refused(reference_params):
    with pytest.raises(ValueError, match="finite"):
        propagate_cycle(initial_moments(reference_params, 1), math.nan, reference_params, 1)


def test_correlation_under_absence_warns(reference_params):
    with pytest.warns(RegimeWarning):
        propagate_cycle(initial_moments(reference_params, 1), 0.0, reference_params, 0)


def test_negative_cycle_index_is_refused(reference_params):
    with pytest.raises(ValueError):
        csi_trajectory(reference_params, 1, -1)
