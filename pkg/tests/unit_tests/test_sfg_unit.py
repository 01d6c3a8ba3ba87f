import math
import numpy as np
import pytest
from qisim.gaussian import covariance_from_moments
from qisim.models import ModePairMoments, SfgQubitState
from qisim.models.covariance import OMEGA
from qisim.sfg import (
    coherent_conservation_defect,
    compose_squeeze,
    evolve_qubit_analytic,
    sfg_quarter_period_as_tms,
    tms_on_moments,
    tms_symplectic,
)


@pytest.fixture()
def initial(weak_pair_moments):
    return SfgQubitState.from_pair_moments(weak_pair_moments)


def test_zero_time_is_identity(initial):
    """Tests evolving for t = 0 returns the input moments"""
    state = evolve_qubit_analytic(initial, g=1.0, t=0.0, M=3)
    assert state.C == pytest.approx(initial.C)
    assert abs(state.b) == 0.0
    assert state.n_b == 0.0
    assert state.n_si == pytest.approx(initial.n_si, rel=1e-12)
    assert state.G.real == pytest.approx(initial.G.real, rel=1e-9)


def test_single_pair_quarter_period(initial):
    """Tests n_b reaches |C|^2 + n_s n_i = 7.25e-6 for one pair"""
    state = evolve_qubit_analytic(initial, g=1.0, t=math.pi / 2.0, M=1)
    assert state.n_b == pytest.approx(7.25e-6, rel=1e-12)
    assert abs(state.C) < 1e-18
    assert state.b == pytest.approx(-1j * initial.C, rel=1e-12)


@pytest.mark.parametrize("M", [1, 2, 3, 10])
def test_quarter_period_converts_correlation(initial, M):
    """Tests b = -i sqrt(M) C0 and n_b = M|C0|^2 + n_s n_i at sqrt(M) g t = pi/2"""
    g = 0.7
    state = evolve_qubit_analytic(initial, g=g, t=math.pi / (2.0 * math.sqrt(M) * g), M=M)
    assert state.b == pytest.approx(-1j * math.sqrt(M) * initial.C, rel=1e-12)
    assert state.n_b == pytest.approx(M * 0.0015**2 + 0.0025 * 0.002, rel=1e-12)
    assert abs(state.F) < 1e-12


@pytest.mark.parametrize("M", [1, 2, 3])
def test_half_period_returns_photons(initial, M):
    """Tests the flow reverses: C = -C0 and b, n_b vanish at sqrt(M) g t = pi"""
    state = evolve_qubit_analytic(initial, g=1.0, t=math.pi / math.sqrt(M), M=M)
    assert state.C == pytest.approx(-initial.C, rel=1e-12)
    assert abs(state.b) < 1e-17
    assert state.n_b < 1e-25


@pytest.mark.parametrize("t", [0.1, 0.4, 1.0, 2.5])
def test_photon_bookkeeping(initial, t):
    """Tests every photon in b left a signal and an idler, and |b|^2 + M|C|^2 is conserved"""
    M = 3
    state = evolve_qubit_analytic(initial, g=1.0, t=t, M=M)
    assert M * (initial.n_s - state.n_s) == pytest.approx(state.n_b, rel=1e-9)
    assert M * (initial.n_i - state.n_i) == pytest.approx(state.n_b, rel=1e-9)
    assert coherent_conservation_defect(state, initial, M) < 1e-12


def test_rejects_negative_time(initial):
    with pytest.raises(ValueError, match="non-negative"):
        evolve_qubit_analytic(initial, g=1.0, t=-0.1, M=1)


def test_rejects_occupied_sum_frequency_mode(initial):
    """Tests an input with photons already in b is refused"""
    with pytest.raises(ValueError, match="vacuum"):
        evolve_qubit_analytic(initial.with_updates(n_b=1e-3), g=1.0, t=0.1, M=1)


def test_tms_zero_is_identity(weak_pair_moments):
    assert tms_on_moments(weak_pair_moments, 0.0) == weak_pair_moments


def test_tms_on_vacuum():
    """Tests S(r)|0,0> has n = r^2 and C = -r sqrt(1 + r^2)"""
    r = 0.3
    out = tms_on_moments(ModePairMoments(0.0, 0.0, 0.0), r)
    assert out.n_s == pytest.approx(r * r)
    assert out.n_i == pytest.approx(r * r)
    assert out.C_si == pytest.approx(-r * math.sqrt(1.0 + r * r))


@pytest.mark.parametrize("r", [-0.4, -1e-3, 0.05, 0.8])
def test_tms_matches_symplectic_action(r):
    """Tests the moment map against S V S^T on the Wigner covariance"""
    moments = ModePairMoments(n_s=20.0, n_i=1e-4, C_si=9e-4)
    S = tms_symplectic(r)
    expected = S @ covariance_from_moments(moments).matrix @ S.T
    actual = covariance_from_moments(tms_on_moments(moments, r)).matrix
    np.testing.assert_allclose(actual, expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("eta", [1e-5, 1e-4, 2e-3])
@pytest.mark.parametrize("f", [0.0, 1e-3, -0.02, 0.3])
def test_tms_reduces_to_first_order_in_eta(eta, f):
    """Tests the exact map on a tapped pair against its leading-order-in-eta forms

    S(sqrt(eta) f) on (eta n_s, n_i, sqrt(eta) C) gives eta n_s + eta(f^2 - 2fC),
    n_i + eta(f^2 - 2fC) and sqrt(eta)(C - f); the nulling squeeze that follows
    leaves eta(n_s - C^2), n_i - eta C^2 and no correlation.
    """
    n_s, n_i, C = 20.0, 1e-4, 1e-3
    tapped = ModePairMoments(n_s=eta * n_s, n_i=n_i, C_si=math.sqrt(eta) * C)
    # dropped terms are O(eta^2) in the photon numbers and O(eta^1.5) in C,
    # plus terms suppressed by the weak idler
    photons = eta * n_i + 4.0 * eta**2 * (1.0 + f * f * n_s)
    correlation = math.sqrt(eta) * n_i + 4.0 * eta**1.5 * (1.0 + abs(f) * n_s)

    squeezed = tms_on_moments(tapped, math.sqrt(eta) * f)
    assert squeezed.n_s == pytest.approx(eta * (n_s + f * f - 2.0 * f * C), abs=photons)
    assert squeezed.n_i == pytest.approx(n_i + eta * (f * f - 2.0 * f * C), abs=photons)
    assert squeezed.C_si == pytest.approx(math.sqrt(eta) * (C - f), abs=correlation)

    nulled = tms_on_moments(squeezed, squeezed.C_si)
    assert nulled.n_s == pytest.approx(eta * (n_s - C * C), abs=photons)
    assert nulled.n_i == pytest.approx(n_i - eta * C * C, abs=photons)
    assert nulled.C_si == pytest.approx(0.0, abs=correlation)


def test_tms_symplectic_preserves_form():
    S = tms_symplectic(0.37)
    np.testing.assert_allclose(S @ OMEGA @ S.T, OMEGA, atol=1e-14)


@pytest.mark.parametrize("r1, r2", [(0.1, 0.2), (-0.3, 0.05), (0.5, -0.5)])
def test_squeezers_compose(r1, r2):
    """Tests S(r2) S(r1) = S(r12) for matrices and moments"""
    r12 = compose_squeeze(r1, r2)
    np.testing.assert_allclose(
        tms_symplectic(r2) @ tms_symplectic(r1), tms_symplectic(r12), atol=1e-13
    )
    moments = ModePairMoments(n_s=0.01, n_i=0.02, C_si=0.005)
    twice = tms_on_moments(tms_on_moments(moments, r1), r2)
    once = tms_on_moments(moments, r12)
    assert twice.n_s == pytest.approx(once.n_s, rel=1e-10, abs=1e-15)
    assert twice.n_i == pytest.approx(once.n_i, rel=1e-10, abs=1e-15)
    assert twice.C_si == pytest.approx(once.C_si, rel=1e-10, abs=1e-15)


def test_quarter_period_surrogate_without_correlation():
    """Tests a pair with C = 0 leaves only thermal sum-frequency light"""
    moments = ModePairMoments(n_s=0.04, n_i=1e-4, C_si=0.0)
    out, amplitude, thermal = sfg_quarter_period_as_tms(moments, M=1000)
    assert out == moments
    assert amplitude == 0
    assert thermal == pytest.approx(4e-6)


def test_quarter_period_surrogate_amplitude(reference_params):
    """Tests |b|^2 = M eta C_p^2 on a tapped reference-scenario pair"""
    eta = reference_params.eta
    tapped = ModePairMoments(
        n_s=eta * reference_params.N_B,
        n_i=reference_params.N_S,
        C_si=math.sqrt(eta) * reference_params.C_p,
    )
    _, amplitude, thermal = sfg_quarter_period_as_tms(tapped, reference_params.M)
    assert abs(amplitude) ** 2 == pytest.approx(
        reference_params.M * eta * reference_params.C_p**2, rel=1e-12
    )
    assert thermal == pytest.approx(reference_params.b_thermal_mean, rel=1e-12)
