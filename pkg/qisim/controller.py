"""Feed-forward squeezing law, Bayesian posterior updates and decisions"""

import logging
import math
from typing import Optional, Protocol, Sequence
import numpy as np
from scipy.special import expit
from qisim.counting import joint_likelihood, likelihood_params
from qisim.exceptions import ModelViolationError
from qisim.models import (
    BeliefState,
    CountLikelihoodParams,
    CountRecord,
    ScenarioParams,
    Schedule,
)

logger = logging.getLogger(__name__)

# exp(-745) is the smallest positive double
LOG_RATIO_LIMIT = 745.0
# posterior log-odds bound; 1/(1 + e^700) is still a normal double
LOG_ODDS_LIMIT = 700.0
SIGMA_FLOOR = 1e-300
# Largest |r_k| allowed, in units of lambda_0
SQUEEZE_CLAMP = 1e3


def build_schedule(params: ScenarioParams) -> Schedule:
    """lambda_k = sqrt(eta) C_p [1 - eta(1 + N_B)]^k and the photon totals

    The coherent total is the exact discrete sum 2 M sum_k lambda_k^2; the
    continuum value (1 - eps) M kappa N_S / N_B is kept alongside it.
    """
    K = params.cycles
    epsilon = params.residual_fraction
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"Residual fraction must lie in (0, 1), got {epsilon}")
    lambdas = math.sqrt(params.eta) * params.C_p * params.depletion ** np.arange(K)
    cumulative = np.cumsum(lambdas**2)
    return Schedule(
        lambdas=lambdas,
        K=K,
        epsilon=epsilon,
        M=params.M,
        N_T_coh=2.0 * params.M * float(cumulative[-1]),
        N_T_therm=K * params.eta * params.N_B * params.N_S,
        N_T_coh_asymptotic=(1.0 - epsilon) * params.M * params.kappa * params.N_S / params.N_B,
        cumulative=cumulative,
    )


def sigma_factor(k: int, schedule: Schedule, M: int) -> float:
    """[1 - exp(-2M(sum_{l<=k} lambda_l^2 - lambda_k^2 / 2))]^(-1/2)"""
    if not 0 <= k < schedule.K:
        raise IndexError(f"Cycle {k} outside schedule of {schedule.K} cycles")
    exposure = 2.0 * M * (schedule.cumulative[k] - 0.5 * schedule.lambdas[k] ** 2)
    return 1.0 / math.sqrt(max(-math.expm1(-exposure), SIGMA_FLOOR))


def sigma_sequence(schedule: Schedule, M: int) -> np.ndarray:
    exposure = 2.0 * M * (schedule.cumulative - 0.5 * schedule.lambdas**2)
    return 1.0 / np.sqrt(np.maximum(-np.expm1(-exposure), SIGMA_FLOOR))


def squeeze_param(k: int, h_tilde: int, schedule: Schedule, M: int) -> float:
    """r_k = (lambda_k / 2)(1 - (-1)^h_tilde sigma_k)

    Magnitudes beyond SQUEEZE_CLAMP * lambda_0 are clamped, which only
    happens when M lambda_0^2 is tiny and sigma_0 diverges.
    """
    if h_tilde not in (0, 1):
        raise ValueError(f"Tentative decision must be 0 or 1, got {h_tilde}")
    lam = schedule.lambdas[k]
    sign = 1.0 if h_tilde == 0 else -1.0
    r = 0.5 * lam * (1.0 - sign * sigma_factor(k, schedule, M))
    limit = SQUEEZE_CLAMP * schedule.lambdas[0]
    if abs(r) > limit:
        logger.warning(
            "Clamping squeeze r_%d=%.3g to %.3g (M lambda_0^2 = %.3g)",
            k,
            r,
            math.copysign(limit, r),
            M * schedule.lambdas[0] ** 2,
        )
        r = math.copysign(limit, r)
    return float(r)


def tentative_decision(belief: BeliefState, rng: np.random.Generator) -> int:
    """More probable hypothesis; a seeded coin flip on an exact tie"""
    leader = belief.leader
    if leader is None:
        return int(rng.integers(2))
    return leader


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else -math.inf


def bayes_update(
    belief: BeliefState,
    record: CountRecord,
    likelihoods: Sequence[CountLikelihoodParams],
    rng: Optional[np.random.Generator] = None,
) -> BeliefState:
    """Posterior after one cycle's counts, computed on the log-odds

    ``likelihoods[j]`` holds the count-law parameters under hypothesis j for
    the squeeze that was used. On an exact posterior tie the new tentative
    decision is a coin flip from ``rng`` or, without one, the previous one.

    Raises:
        ModelViolationError: the counts are impossible under every hypothesis
            that still has prior weight
    """
    log_like = [joint_likelihood(record, likelihoods[j]) for j in (0, 1)]
    weighted = [_log(belief.p0) + log_like[0], _log(belief.p1) + log_like[1]]
    if weighted[0] == -math.inf and weighted[1] == -math.inf:
        raise ModelViolationError(
            f"Counts N_b={record.N_b}, N_E={record.N_E} at cycle {record.k} have "
            "zero probability under both hypotheses"
        )

    if weighted[0] == -math.inf:
        p0, p1 = 0.0, 1.0
    elif weighted[1] == -math.inf:
        p0, p1 = 1.0, 0.0
    else:
        ratio = min(max(log_like[1] - log_like[0], -LOG_RATIO_LIMIT), LOG_RATIO_LIMIT)
        log_odds = _log(belief.p1) - _log(belief.p0) + ratio
        # neither posterior may underflow to zero, or later counts could not move it
        log_odds = min(max(log_odds, -LOG_ODDS_LIMIT), LOG_ODDS_LIMIT)
        p0, p1 = float(expit(-log_odds)), float(expit(log_odds))

    if p1 > p0:
        h_tilde = 1
    elif p0 > p1:
        h_tilde = 0
    else:
        h_tilde = int(rng.integers(2)) if rng is not None else belief.h_tilde
    return BeliefState(p0=p0, p1=p1, h_tilde=h_tilde, k=belief.k + 1)


def initial_belief(params: ScenarioParams, rng: np.random.Generator) -> BeliefState:
    prior = BeliefState(p0=1.0 - params.prior_h1, p1=params.prior_h1, h_tilde=0)
    return BeliefState(
        p0=prior.p0, p1=prior.p1, h_tilde=tentative_decision(prior, rng), k=0
    )


class Controller(Protocol):
    """Causal receiver controller driven by the count sampler

    ``squeeze(k)`` is asked for cycle k before its counts exist;
    ``observe`` then receives them.
    """

    def squeeze(self, k: int) -> float: ...

    def observe(self, record: CountRecord) -> BeliefState: ...

    def decision(self) -> int: ...


class _BayesTracker:
    def __init__(
        self,
        params: ScenarioParams,
        rng: np.random.Generator,
        schedule: Optional[Schedule] = None,
        thermal_mean: Optional[float] = None,
    ):
        self.params = params
        self.schedule = schedule if schedule is not None else build_schedule(params)
        self.rng = rng
        self.thermal_mean = thermal_mean
        self.belief = initial_belief(params, rng)
        self.r_k = 0.0

    def _update(self, record: CountRecord) -> BeliefState:
        likelihoods = [
            likelihood_params(
                self.schedule,
                self.params,
                record.k,
                j,
                self.r_k,
                thermal_mean=self.thermal_mean,
            )
            for j in (0, 1)
        ]
        self.belief = bayes_update(self.belief, record, likelihoods, self.rng)
        return self.belief


class FeedForwardController(_BayesTracker):
    """FF-SFG: squeeze set from the current tentative decision each cycle"""

    def squeeze(self, k: int) -> float:
        self.r_k = squeeze_param(k, self.belief.h_tilde, self.schedule, self.params.M)
        return self.r_k

    def observe(self, record: CountRecord) -> BeliefState:
        return self._update(record)

    def decision(self) -> int:
        return self.belief.h_tilde


class SfgController(_BayesTracker):
    """Plain SFG: no squeezing, decide presence once counts exceed a threshold

    The posterior is still tracked so trajectories can be inspected.
    """

    def __init__(
        self,
        params: ScenarioParams,
        rng: np.random.Generator,
        schedule: Optional[Schedule] = None,
        thermal_mean: Optional[float] = None,
        count_threshold: int = 0,
    ):
        super().__init__(params, rng, schedule, thermal_mean)
        if count_threshold < 0:
            raise ValueError(f"Count threshold must be non-negative, got {count_threshold}")
        self.count_threshold = count_threshold
        self.total_counts = 0

    def squeeze(self, k: int) -> float:
        self.r_k = 0.0
        return self.r_k

    def observe(self, record: CountRecord) -> BeliefState:
        self.total_counts += record.total
        return self._update(record)

    def decision(self) -> int:
        return int(self.total_counts > self.count_threshold)
