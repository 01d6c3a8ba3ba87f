"""Hypothesis-conditioned Gaussian states of the returned-signal/idler pairs"""

import numpy as np
from qisim.enums import Hypothesis
from qisim.exceptions import UnphysicalStateError
from qisim.models import ModePairMoments, ScenarioParams, WignerCovariance

_IDENTITY = np.eye(2)
_Z = np.diag([1.0, -1.0])


def phase_sensitive_cross_correlation(params: ScenarioParams) -> float:
    """C_p = sqrt(kappa N_S (N_S + 1))"""
    return params.C_p


def covariance_from_moments(moments: ModePairMoments) -> WignerCovariance:
    """Wigner covariance of a zero-mean pair with real <a_S a_I>

    Signal quadratures first, vacuum variance 1/4.
    """
    signal = (2.0 * moments.n_s + 1.0) * _IDENTITY
    idler = (2.0 * moments.n_i + 1.0) * _IDENTITY
    cross = 2.0 * moments.C_si * _Z
    return WignerCovariance(0.25 * np.block([[signal, cross], [cross, idler]]))


def build_covariance(params: ScenarioParams, h: int) -> WignerCovariance:
    """Covariance of a returned-signal/retained-idler pair given hypothesis h"""
    correlation = params.C_p if Hypothesis(h) is Hypothesis.PRESENT else 0.0
    return covariance_from_moments(ModePairMoments(params.N_B, params.N_S, correlation))


def moments_from_covariance(cov: WignerCovariance) -> ModePairMoments:
    """Read (n_s, n_i, C_si) back out of a pair covariance

    Raises:
        UnphysicalStateError: the covariance violates the uncertainty principle
    """
    if not cov.is_physical():
        raise UnphysicalStateError(
            "Covariance has symplectic eigenvalue below the vacuum variance: "
            f"{cov.symplectic_eigenvalues().min():.3e}"
        )
    matrix = cov.matrix
    n_s = (4.0 * matrix[0, 0] - 1.0) / 2.0
    n_i = (4.0 * matrix[2, 2] - 1.0) / 2.0
    return ModePairMoments(n_s=n_s, n_i=n_i, C_si=2.0 * matrix[0, 2])
