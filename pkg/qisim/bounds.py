"""Closed-form error-probability bounds and comparator receivers"""

import logging
import math
import warnings
from typing import NamedTuple, Optional
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erfc, gammaln
from scipy.stats import norm
from qisim.exceptions import RegimeWarning
from qisim.models import BoundResult, ScenarioParams

logger = logging.getLogger(__name__)

MAX_HELSTROM_DIMENSION = 64
_STATE_TOLERANCE = 1e-9


def _validate_density(rho: np.ndarray, name: str) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {rho.shape}")
    if rho.shape[0] > MAX_HELSTROM_DIMENSION:
        raise ValueError(
            f"{name} has dimension {rho.shape[0]} > {MAX_HELSTROM_DIMENSION}"
        )
    if not np.allclose(rho, rho.conj().T, atol=_STATE_TOLERANCE):
        raise ValueError(f"{name} is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-6:
        raise ValueError(f"{name} has trace {trace:.9g}, expected 1")
    smallest = np.linalg.eigvalsh(rho).min()
    if smallest < -1e-8:
        raise ValueError(f"{name} has negative eigenvalue {smallest:.3g}")
    return rho


def helstrom_general(rho0: np.ndarray, rho1: np.ndarray, p1: float = 0.5) -> BoundResult:
    """P_H = (1 - ||p1 rho1 - p0 rho0||_1) / 2 for small density matrices

    Raises:
        ValueError: mismatched, oversized, non-Hermitian, non-unit-trace or
            non-PSD inputs, or a prior outside [0, 1]
    """
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"Prior must lie in [0, 1], got {p1}")
    rho0 = _validate_density(rho0, "rho0")
    rho1 = _validate_density(rho1, "rho1")
    if rho0.shape != rho1.shape:
        raise ValueError(f"Shape mismatch: {rho0.shape} vs {rho1.shape}")
    gamma = p1 * rho1 - (1.0 - p1) * rho0
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (gamma + gamma.conj().T)))))
    return BoundResult(max(0.5 * (1.0 - trace_norm), 0.0), "helstrom")


def coherent_ket(alpha: complex, cutoff: int) -> np.ndarray:
    """|alpha> on Fock levels 0..cutoff-1 (not renormalized)"""
    if alpha == 0:
        ket = np.zeros(cutoff, dtype=complex)
        ket[0] = 1.0
        return ket
    n = np.arange(cutoff)
    log_amplitude = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_amplitude) * np.exp(1j * n * np.angle(alpha))


def helstrom_coherent_vs_vacuum(N: float) -> BoundResult:
    """[1 - sqrt(1 - exp(-N))] / 2"""
    if N < 0:
        raise ValueError(f"Mean photon number must be non-negative, got {N}")
    return BoundResult(0.5 * (1.0 - math.sqrt(-math.expm1(-N))), "helstrom")


def qcb_qi(params: ScenarioParams) -> BoundResult:
    """QI quantum Chernoff bound exp(-M kappa N_S / N_B) / 2"""
    return BoundResult(0.5 * math.exp(-params.qcb_exponent), "qcb")


class WeakSignalBounds(NamedTuple):
    qcb: BoundResult
    opa: BoundResult
    homodyne: BoundResult
    sfg: BoundResult


def weak_signal_bounds(M: int, C_p: float, N_S: float, N_B: float) -> WeakSignalBounds:
    """Error probabilities when N_B << 1 and a single SFG pass is used"""
    if N_B > 0.1:
        warnings.warn(
            f"Weak-signal formulas assume N_B << 1, got {N_B:g}", RegimeWarning, stacklevel=2
        )
    coherent = M * C_p * C_p
    return WeakSignalBounds(
        qcb=BoundResult(0.5 * math.exp(-coherent), "qcb"),
        opa=BoundResult(0.5 * math.exp(-coherent / 2.0), "opa"),
        homodyne=BoundResult(0.5 * math.exp(-coherent / 2.0), "homodyne"),
        sfg=BoundResult(min(0.5 * (math.exp(-coherent) + N_S * N_B), 0.5), "sfg"),
    )


def kennedy_error(alpha_sq: float) -> BoundResult:
    if alpha_sq < 0:
        raise ValueError(f"Mean photon number must be non-negative, got {alpha_sq}")
    return BoundResult(0.5 * math.exp(-4.0 * alpha_sq), "kennedy")


def improved_kennedy_error(alpha: float, beta: float) -> float:
    """(1 - exp(-(alpha - beta)^2) + exp(-(alpha + beta)^2)) / 2"""
    return 0.5 * (1.0 - math.exp(-((alpha - beta) ** 2)) + math.exp(-((alpha + beta) ** 2)))


class KennedyOptimum(NamedTuple):
    beta: float
    error_probability: float


def optimal_improved_kennedy(alpha: float) -> KennedyOptimum:
    """Displacement minimizing the improved-Kennedy error for real alpha >= 0"""
    if alpha < 0:
        raise ValueError(f"Amplitude must be non-negative, got {alpha}")
    result = minimize_scalar(
        lambda beta: improved_kennedy_error(alpha, beta),
        bounds=(0.0, alpha + 3.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return KennedyOptimum(float(result.x), float(result.fun))


def bpsk_helstrom_povm(alpha_sq: float) -> np.ndarray:
    """Helstrom element Pi_1 for |alpha> vs |-alpha> after displacement by alpha

    In the basis {|0_perp>, |0>} with |0_perp> built from |2 alpha>.
    """
    if alpha_sq < 0:
        raise ValueError(f"Mean photon number must be non-negative, got {alpha_sq}")
    spread = math.sqrt(-math.expm1(-4.0 * alpha_sq))
    off = 0.5 * math.exp(-2.0 * alpha_sq)
    return np.array([[0.5 * (1.0 - spread), off], [off, 0.5 * (1.0 + spread)]])


def homodyne_coherent_error(N: float) -> BoundResult:
    """|sqrt(N)> vs |0> with x-quadrature homodyne and a midpoint threshold

    x has variance 1/4, so the means sqrt(N) and 0 are separated by
    2 sqrt(N) standard deviations.
    """
    if N < 0:
        raise ValueError(f"Mean photon number must be non-negative, got {N}")
    return BoundResult(0.5 * float(erfc(math.sqrt(N / 2.0))), "homodyne")


def _opa_means(params: ScenarioParams, gain: float) -> tuple[float, float]:
    base = gain * params.N_S + (gain - 1.0) * (params.N_B + 1.0)
    cross = 2.0 * math.sqrt(gain * (gain - 1.0)) * params.C_p
    return base, base + cross


def _gaussian_threshold_error(
    mean0: float, var0: float, mean1: float, var1: float
) -> float:
    """Minimum equal-prior error of two Gaussians over a single threshold"""
    if mean1 == mean0:
        return 0.5
    lo, hi = sorted((mean0, mean1))
    sd0, sd1 = math.sqrt(var0), math.sqrt(var1)
    sign = 1.0 if mean1 > mean0 else -1.0

    def error(threshold: float) -> float:
        false_alarm = norm.sf(sign * (threshold - mean0) / sd0)
        miss = norm.cdf(sign * (threshold - mean1) / sd1)
        return 0.5 * (false_alarm + miss)

    result = minimize_scalar(error, bounds=(lo, hi), method="bounded", options={"xatol": 1e-9 * hi})
    return float(min(result.fun, 0.5))


def opa_error_at_gain(params: ScenarioParams, gain: float) -> float:
    if gain <= 1.0:
        raise ValueError(f"OPA gain must exceed 1, got {gain}")
    n0, n1 = _opa_means(params, gain)
    M = params.M
    if M == 0:
        return 0.5
    return _gaussian_threshold_error(M * n0, M * n0 * (n0 + 1.0), M * n1, M * n1 * (n1 + 1.0))


def opa_qi_error(params: ScenarioParams, gain: Optional[float] = None) -> BoundResult:
    """Phase-conjugating OPA receiver with a Gaussian count-total threshold

    Without an explicit gain, the gain is optimized over
    (1, 1 + 10 sqrt(N_S / N_B)).
    """
    if gain is not None:
        return BoundResult(opa_error_at_gain(params, gain), "opa")
    if params.C_p == 0 or params.M == 0:
        return BoundResult(0.5, "opa")
    upper = 1.0 + 10.0 * math.sqrt(params.N_S / params.N_B)
    result = minimize_scalar(
        lambda g: math.log(max(opa_error_at_gain(params, g), 1e-300)),
        bounds=(1.0 + 1e-12, upper),
        method="bounded",
    )
    logger.debug("OPA gain optimum G=%.9g", result.x)
    return BoundResult(opa_error_at_gain(params, float(result.x)), "opa")


def scenario_bounds(params: ScenarioParams) -> dict[str, BoundResult]:
    """Comparators at coherent total N = M kappa N_S / N_B

    Kennedy uses the equivalent |alpha> vs |-alpha> problem, 4|alpha|^2 = N.
    """
    N = params.qcb_exponent
    return {
        "helstrom": helstrom_coherent_vs_vacuum(N),
        "qcb": qcb_qi(params),
        "homodyne": homodyne_coherent_error(N),
        "opa": opa_qi_error(params),
        "kennedy": kennedy_error(N / 4.0),
    }
