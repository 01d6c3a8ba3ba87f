"""Photon-count laws of one receiver cycle and the correlated trial sampler

N_b (sum-frequency mode) follows the Laguerre law of a coherent state in
thermal noise. N_E (the M E modes) is negative binomial, the sum of M iid
thermal modes. Across cycles the N_b are independent while the N_E share a
common total intensity mu_tot drawn once per trial.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Optional
import numpy as np
from scipy.special import gammaln, xlogy
from qisim.enums import Hypothesis, MuTotalLaw
from qisim.exceptions import ModelViolationError
from qisim.models import (
    CountLikelihoodParams,
    CountRecord,
    CycleRecord,
    ScenarioParams,
    Schedule,
    TrialTrajectory,
)

if TYPE_CHECKING:
    from qisim.controller import Controller

logger = logging.getLogger(__name__)

COUNT_CAP = 1_000_000
_RESCALE = 1e250
_LOG_RESCALE = math.log(_RESCALE)
_MAX_REDRAWS = 1000


def _check_non_negative(**values: float) -> None:
    for name, value in values.items():
        if value < 0 or math.isnan(value):
            raise ValueError(f"{name} must be non-negative, got {value}")


def _log_laguerre_negative(n: int, y: float) -> float:
    """log L_n(-y) for y >= 0 by the forward three-term recurrence

    Every term is positive at a negative argument, so the recurrence is
    stable; the pair is rescaled whenever it grows past 1e250.
    """
    if n == 0:
        return 0.0
    previous, current = 1.0, 1.0 + y
    log_scale = 0.0
    for k in range(1, n):
        previous, current = current, ((2 * k + 1 + y) * current - k * previous) / (k + 1)
        if current > _RESCALE:
            previous /= _RESCALE
            current /= _RESCALE
            log_scale += _LOG_RESCALE
    return math.log(current) + log_scale


def log_p_b_pmf(n: int, coherent_mean: float, thermal_mean: float) -> float:
    _check_non_negative(n=n, coherent_mean=coherent_mean, thermal_mean=thermal_mean)
    x, nbar = coherent_mean, thermal_mean
    if nbar == 0.0:
        return float(-x + xlogy(n, x) - gammaln(n + 1))
    y = x / (nbar * (1.0 + nbar))
    return (
        -x / (1.0 + nbar)
        + n * math.log(nbar)
        - (n + 1) * math.log1p(nbar)
        + _log_laguerre_negative(n, y)
    )


def p_b_pmf(n: int, coherent_mean: float, thermal_mean: float) -> float:
    """P(N_b = n) for a coherent state of mean x in thermal noise of mean nbar

    exp(-x/(1+nbar)) nbar^n / (1+nbar)^(n+1) L_n(-x / (nbar (1+nbar)))

    Raises:
        ValueError: any negative argument
    """
    return math.exp(log_p_b_pmf(n, coherent_mean, thermal_mean))


def p_b_pmf_table(n_max: int, coherent_mean: float, thermal_mean: float) -> np.ndarray:
    """P(N_b = n) for n = 0..n_max"""
    _check_non_negative(n_max=n_max, coherent_mean=coherent_mean, thermal_mean=thermal_mean)
    x, nbar = coherent_mean, thermal_mean
    n = np.arange(n_max + 1)
    if nbar == 0.0:
        return np.exp(-x + xlogy(n, x) - gammaln(n + 1))

    y = x / (nbar * (1.0 + nbar))
    log_laguerre = np.zeros(n_max + 1)
    previous, current, log_scale = 1.0, 1.0 + y, 0.0
    if n_max >= 1:
        log_laguerre[1] = math.log(current)
    for k in range(1, n_max):
        previous, current = current, ((2 * k + 1 + y) * current - k * previous) / (k + 1)
        if current > _RESCALE:
            previous /= _RESCALE
            current /= _RESCALE
            log_scale += _LOG_RESCALE
        log_laguerre[k + 1] = math.log(current) + log_scale
    return np.exp(
        -x / (1.0 + nbar) + n * math.log(nbar) - (n + 1) * math.log1p(nbar) + log_laguerre
    )


def log_p_e_pmf(n: int, M: int, e_per_mode: float) -> float:
    _check_non_negative(n=n, M=M, e_per_mode=e_per_mode)
    if M == 0:
        return 0.0 if n == 0 else -math.inf
    # log C(n + M - 1, n) without cancellation at M ~ 1e9
    log_binomial = float(np.sum(np.log1p((M - 1) / np.arange(1, n + 1)))) if n else 0.0
    return float(log_binomial + xlogy(n, e_per_mode) - (n + M) * math.log1p(e_per_mode))


def p_e_pmf(n: int, M: int, e_per_mode: float) -> float:
    """P(N_E = n): negative binomial C(n+M-1, M-1) e^n / (1+e)^(n+M)"""
    return math.exp(log_p_e_pmf(n, M, e_per_mode))


def p_e_pmf_table(n_max: int, M: int, e_per_mode: float) -> np.ndarray:
    _check_non_negative(n_max=n_max, M=M, e_per_mode=e_per_mode)
    n = np.arange(n_max + 1)
    if M == 0:
        return (n == 0).astype(float)
    log_binomial = np.concatenate(([0.0], np.cumsum(np.log1p((M - 1) / n[1:]))))
    return np.exp(log_binomial + xlogy(n, e_per_mode) - (n + M) * math.log1p(e_per_mode))


def support_bound(mean: float, variance: float) -> int:
    """Cutoff past which a count law of this mean and variance has < 1e-9 mass"""
    _check_non_negative(mean=mean, variance=variance)
    return int(math.ceil(mean + 25.0 * math.sqrt(variance) + 40.0))


def p_b_support(coherent_mean: float, thermal_mean: float) -> int:
    variance = coherent_mean * (1.0 + 2.0 * thermal_mean) + thermal_mean * (1.0 + thermal_mean)
    return support_bound(coherent_mean + thermal_mean, variance)


def p_e_support(M: int, e_per_mode: float) -> int:
    return support_bound(M * e_per_mode, M * e_per_mode * (1.0 + e_per_mode))


def joint_likelihood(record: CountRecord, params_for_j: CountLikelihoodParams) -> float:
    """log P_B(N_b) + log P_E(N_E) under one hypothesis"""
    return log_p_b_pmf(
        record.N_b, params_for_j.coherent_mean, params_for_j.thermal_mean
    ) + log_p_e_pmf(record.N_E, params_for_j.modes, params_for_j.e_per_mode)


def likelihood_params(
    schedule: Schedule,
    params: ScenarioParams,
    k: int,
    j: int,
    r_k: float,
    thermal_mean: Optional[float] = None,
) -> CountLikelihoodParams:
    """Count-law parameters of cycle k under hypothesis j for squeeze r_k

    The residual j lambda_k - r_k is what survives the squeeze; under the
    feed-forward law its square is r^(k)_{h~ xor j}^2.
    """
    residual = int(Hypothesis(j)) * schedule.lambdas[k] - r_k
    e = float(residual * residual)
    return CountLikelihoodParams(
        coherent_mean=params.M * e,
        thermal_mean=params.b_thermal_mean if thermal_mean is None else thermal_mean,
        e_per_mode=e,
        modes=params.M,
    )


class CountSampler:
    """Draws one trial's counts cycle by cycle

    mu_tot, the trial's total E-mode intensity, is fixed by the first cycle's
    residual amplitude a_0 = sqrt(eta) C_si^(0) - r_0. Later N_E^(k) are
    Poisson with mean (a_k / a_0)^2 mu_tot, so they are correlated through
    mu_tot. When a_0 = 0 the anchor degenerates and every N_E^(k) is drawn
    as an independent negative binomial instead.
    """

    def __init__(
        self,
        params: ScenarioParams,
        rng: np.random.Generator,
        thermal_mean: Optional[float] = None,
        law: MuTotalLaw = MuTotalLaw.GAUSSIAN,
    ):
        self.M = params.M
        self.rng = rng
        self.thermal_mean = params.b_thermal_mean if thermal_mean is None else thermal_mean
        self.law = MuTotalLaw(law)
        self.anchor: Optional[float] = None
        self.mu_total: Optional[float] = None

    def _draw_mu_total(self, anchor: float) -> float:
        scale = anchor * anchor
        if self.law is MuTotalLaw.GAMMA:
            return float(self.rng.gamma(self.M, scale))
        mean = self.M * scale
        sd = math.sqrt(self.M) * scale
        for redraw in range(_MAX_REDRAWS):
            value = self.rng.normal(mean, sd)
            if value >= 0.0:
                if redraw:
                    logger.debug("mu_tot truncated at 0 after %d redraws", redraw)
                return float(value)
        raise ModelViolationError(
            f"mu_tot Gaussian (mean {mean:.3g}, sd {sd:.3g}) kept drawing negative values"
        )

    def anchor_on(self, residual_0: float) -> None:
        self.anchor = residual_0
        self.mu_total = self._draw_mu_total(residual_0) if residual_0 != 0.0 else None

    def draw_e(self, residual: float) -> int:
        if self.mu_total is not None:
            count = self.rng.poisson((residual / self.anchor) ** 2 * self.mu_total)
        elif self.M == 0:
            count = 0
        else:
            count = self.rng.negative_binomial(self.M, 1.0 / (1.0 + residual * residual))
        return _capped(int(count), "N_E")

    def draw_b(self, residual: float) -> int:
        amplitude = math.sqrt(self.M) * abs(residual)
        if self.thermal_mean > 0.0:
            spread = math.sqrt(self.thermal_mean / 2.0)
            re, im = self.rng.normal(0.0, spread, size=2)
            intensity = (amplitude + re) ** 2 + im * im
        else:
            intensity = amplitude * amplitude
        return _capped(int(self.rng.poisson(intensity)), "N_b")


def _capped(count: int, label: str) -> int:
    if count > COUNT_CAP:
        raise ModelViolationError(f"{label}={count} exceeds the per-cycle cap {COUNT_CAP}")
    return count


def sample_trajectory(
    params: ScenarioParams,
    h_true: int,
    controller: Controller,
    rng: np.random.Generator,
    schedule: Optional[Schedule] = None,
    thermal_mean: Optional[float] = None,
    law: MuTotalLaw = MuTotalLaw.GAUSSIAN,
) -> TrialTrajectory:
    """Run one K-cycle trial under h_true with a causal controller"""
    if schedule is None:
        from qisim.controller import build_schedule

        schedule = build_schedule(params)
    h = int(Hypothesis(h_true))
    sampler = CountSampler(params, rng, thermal_mean=thermal_mean, law=law)

    records = []
    for k in range(schedule.K):
        r_k = controller.squeeze(k)
        residual = h * schedule.lambdas[k] - r_k
        if k == 0:
            sampler.anchor_on(residual)
        N_E = sampler.draw_e(residual)
        N_b = sampler.draw_b(residual)
        belief = controller.observe(CountRecord(N_b=N_b, N_E=N_E, k=k))
        records.append(
            CycleRecord(
                k=k,
                r_k=r_k,
                N_b=N_b,
                N_E=N_E,
                p0=belief.p0,
                p1=belief.p1,
                h_tilde=belief.h_tilde,
            )
        )
    return TrialTrajectory(cycles=tuple(records), decision=controller.decision(), h_true=h)
