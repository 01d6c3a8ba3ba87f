"""Qubit-approximation SFG dynamics and its two-mode-squeezing surrogate"""

import math
import warnings
from typing import Iterable
import numpy as np
from qisim.exceptions import RegimeWarning
from qisim.models import ModePairMoments, SfgQubitState

# Brightness above which the qubit truncation is no longer trusted
_QUBIT_BRIGHTNESS = 0.1


def _warn_if_bright(n_s: float, n_i: float, C: complex, M: int) -> None:
    total = M * (n_s + n_i)
    coherent = M * abs(C) ** 2
    if total > _QUBIT_BRIGHTNESS or coherent > _QUBIT_BRIGHTNESS:
        warnings.warn(
            f"SFG input with M(n_s+n_i)={total:.3g}, M|C|^2={coherent:.3g} "
            "is outside the qubit approximation",
            RegimeWarning,
            stacklevel=3,
        )


def evolve_qubit_analytic(
    initial: SfgQubitState, g: float, t: float, M: int
) -> SfgQubitState:
    """Closed-form qubit-approximation moments after SFG for a time t

    The sum-frequency mode must start in vacuum (b = n_b = F = 0) with
    G(0) = |C(0)|^2.

    Raises:
        ValueError: negative time or an initial state that is not SFG-ready
    """
    if t < 0:
        raise ValueError(f"Evolution time must be non-negative, got {t}")
    if M < 1:
        raise ValueError(f"Need at least one mode pair, got M={M}")
    if initial.b != 0 or initial.n_b != 0 or initial.F != 0:
        raise ValueError("Sum-frequency mode must start in vacuum (b = n_b = F = 0)")
    c2 = abs(initial.C) ** 2
    if not math.isclose(abs(initial.G), c2, rel_tol=1e-9, abs_tol=1e-300):
        raise ValueError(f"Initial G must equal |C(0)|^2, got G={initial.G}")
    _warn_if_bright(initial.n_s, initial.n_i, initial.C, M)

    root_m = math.sqrt(M)
    theta = root_m * g * t
    sin, cos = math.sin(theta), math.cos(theta)
    thermal = initial.n_s * initial.n_i

    n_b = (M * c2 + thermal) * sin**2
    n_si = (1.0 - 1.0 / M) * thermal + (c2 + thermal / M) * cos**2
    return SfgQubitState(
        C=initial.C * cos,
        b=-1j * root_m * initial.C * sin,
        n_b=n_b,
        n_si=n_si,
        F=-1j * root_m * (c2 + thermal / M) * math.sin(2.0 * theta) / 2.0,
        G=complex(n_si - thermal),
        n_s=initial.n_s - n_b / M,
        n_i=initial.n_i - n_b / M,
    )


def analytic_series(
    initial: SfgQubitState, g: float, M: int, times: Iterable[float]
) -> list[SfgQubitState]:
    return [evolve_qubit_analytic(initial, g, float(t), M) for t in times]


def tms_on_moments(m: ModePairMoments, r: float) -> ModePairMoments:
    """Exact second-moment action of S(r)

    a_S -> sqrt(1+r^2) a_S - r a_I^dag,  a_I -> sqrt(1+r^2) a_I - r a_S^dag
    """
    c = math.sqrt(1.0 + r * r)
    r2 = r * r
    cross = 2.0 * r * c * m.C_si
    return ModePairMoments(
        n_s=c * c * m.n_s + r2 * (1.0 + m.n_i) - cross,
        n_i=c * c * m.n_i + r2 * (1.0 + m.n_s) - cross,
        C_si=(c * c + r2) * m.C_si - r * c * (1.0 + m.n_s + m.n_i),
    )


def tms_symplectic(r: float) -> np.ndarray:
    """4x4 symplectic matrix of S(r) on (x_S, p_S, x_I, p_I)"""
    c = math.sqrt(1.0 + r * r)
    return np.array(
        [
            [c, 0.0, -r, 0.0],
            [0.0, c, 0.0, r],
            [-r, 0.0, c, 0.0],
            [0.0, r, 0.0, c],
        ]
    )


def compose_squeeze(r1: float, r2: float) -> float:
    """Parameter of S(r1) followed by S(r2); the rapidities asinh(r) add"""
    return math.sinh(math.asinh(r1) + math.asinh(r2))


def sfg_quarter_period_as_tms(
    m: ModePairMoments, M: int
) -> tuple[ModePairMoments, complex, float]:
    """Gaussian surrogate for a pi/(2 sqrt(M) g) SFG interaction

    Returns the post-SFG pair moments, the coherent amplitude of the
    sum-frequency mode and its thermal mean photon number.
    """
    if m.n_s > _QUBIT_BRIGHTNESS or m.n_i > _QUBIT_BRIGHTNESS:
        warnings.warn(
            f"Pair moments n_s={m.n_s:.3g}, n_i={m.n_i:.3g} are too bright for "
            "the qubit approximation",
            RegimeWarning,
            stacklevel=2,
        )
    amplitude = -1j * math.sqrt(M) * m.C_si
    return tms_on_moments(m, m.C_si), complex(amplitude), m.n_s * m.n_i


def coherent_conservation_defect(state: SfgQubitState, initial: SfgQubitState, M: int) -> float:
    """Relative defect of |b|^2 + M|C|^2 = M|C(0)|^2"""
    reference = M * abs(initial.C) ** 2
    if reference == 0:
        return abs(state.b) ** 2 + M * abs(state.C) ** 2
    return abs(abs(state.b) ** 2 + M * abs(state.C) ** 2 - reference) / reference


__all__ = [
    "evolve_qubit_analytic",
    "analytic_series",
    "tms_on_moments",
    "tms_symplectic",
    "compose_squeeze",
    "sfg_quarter_period_as_tms",
    "coherent_conservation_defect",
]
