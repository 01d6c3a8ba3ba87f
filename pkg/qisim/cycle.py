"""One receiver cycle on the aggregate mode-pair moments

A cycle taps a fraction eta of every returned signal mode, squeezes the
tapped pairs with S(r_k), runs a quarter-period SFG, unsqueezes with
S(-r_k), recombines, and finally applies S(eps_k) with eps_k = eta f(k) to
the recombined pair. Because the M pairs are identical and only photon-number
sums are measured, one set of moments stands for all of them.
"""

import math
import warnings
from qisim.enums import Hypothesis
from qisim.exceptions import RegimeWarning
from qisim.models import CycleOutput, ModePairMoments, ScenarioParams


def propagate_cycle(
    moments: ModePairMoments, r_k: float, params: ScenarioParams, h: int
) -> CycleOutput:
    """Leading-order-in-eta moments after one cycle with squeeze r_k"""
    if not math.isfinite(r_k):
        raise ValueError(f"Squeeze parameter must be finite, got {r_k}")
    moments.validate()
    if Hypothesis(h) is Hypothesis.ABSENT and moments.C_si != 0:
        warnings.warn(
            f"Cross correlation {moments.C_si:g} under target absence",
            RegimeWarning,
            stacklevel=2,
        )

    eta = params.eta
    root_eta = math.sqrt(eta)
    C = moments.C_si
    f = r_k / root_eta
    residual = root_eta * C - r_k

    out = ModePairMoments(
        n_s=moments.n_s - 2.0 * eta * C * C,
        n_i=moments.n_i - eta * (C * C - f * f + 2.0 * f * C),
        C_si=C * (1.0 - eta * (1.0 + moments.n_s)),
    )
    return CycleOutput(
        out_moments=out,
        b_amp=complex(-1j * math.sqrt(params.M) * residual),
        b_thermal=eta * moments.n_s * moments.n_i,
        e_mean_per_mode=residual * residual,
        r_effective=residual,
    )


def initial_moments(params: ScenarioParams, h: int) -> ModePairMoments:
    correlation = params.C_p if Hypothesis(h) is Hypothesis.PRESENT else 0.0
    return ModePairMoments(n_s=params.N_B, n_i=params.N_S, C_si=correlation)


def csi_trajectory(params: ScenarioParams, h: int, k: int) -> float:
    """C_si before cycle k: h C_p [1 - eta (1 + N_B)]^k"""
    if k < 0:
        raise ValueError(f"Cycle index must be non-negative, got {k}")
    return int(Hypothesis(h)) * params.C_p * params.depletion**k


def propagate_cycles(
    params: ScenarioParams, h: int, squeezes: list[float]
) -> list[CycleOutput]:
    """Iterate propagate_cycle from the hypothesis-h input over a squeeze schedule"""
    moments = initial_moments(params, h)
    outputs = []
    for r_k in squeezes:
        output = propagate_cycle(moments, r_k, params, h)
        outputs.append(output)
        moments = output.out_moments
    return outputs
