"""Monte Carlo trials, error-probability estimation and receiver sweeps

Every trial owns a generator seeded from (seed, stream, h, trial index), so
estimates do not depend on how trials are split across worker processes.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Optional
import numpy as np
from scipy.stats import norm
from tqdm import tqdm
from qisim.bounds import (
    helstrom_coherent_vs_vacuum,
    homodyne_coherent_error,
    opa_qi_error,
    qcb_qi,
)
from qisim.controller import FeedForwardController, SfgController, build_schedule
from qisim.counting import CountSampler, log_p_b_pmf, p_b_pmf, sample_trajectory
from qisim.csv_io import ResultTable
from qisim.enums import Hypothesis, MuTotalLaw, ReceiverKind, RunMode
from qisim.exceptions import SweepSpecError
from qisim.models import (
    CycleRecord,
    ErrorEstimate,
    ScenarioParams,
    Schedule,
    SweepRow,
    SweepSpec,
    TrialTrajectory,
)
from qisim.settings import settings

logger = logging.getLogger(__name__)

MIN_TRIALS = 100
CONFIDENCE = 0.95
TRAJECTORY_COLUMNS = ("k", "r_k", "N_b", "N_E", "p0", "p1", "h_tilde")


def trial_rng(seed: int, h: int, index: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, stream, h, index])


def weak_sfg_thermal_mean(params: ScenarioParams) -> float:
    """Sum-frequency background of one unsliced pass, N_S N_B"""
    return params.N_S * params.N_B


def _weak_sfg_trial(
    params: ScenarioParams,
    h_true: int,
    rng: np.random.Generator,
    thermal_mean: Optional[float] = None,
) -> TrialTrajectory:
    """One SFG pass over all M pairs; decide presence on any b photon"""
    nbar = weak_sfg_thermal_mean(params) if thermal_mean is None else thermal_mean
    h = int(Hypothesis(h_true))
    sampler = CountSampler(params, rng, thermal_mean=nbar)
    N_b = sampler.draw_b(h * params.C_p)

    log0 = log_p_b_pmf(N_b, 0.0, nbar)
    log1 = log_p_b_pmf(N_b, params.M * params.C_p**2, nbar)
    prior0, prior1 = 1.0 - params.prior_h1, params.prior_h1
    joint0 = prior0 * math.exp(log0) if log0 > -math.inf else 0.0
    joint1 = prior1 * math.exp(log1) if log1 > -math.inf else 0.0
    total = joint0 + joint1
    p1 = joint1 / total if total > 0 else prior1
    decision = int(N_b > 0)
    record = CycleRecord(
        k=0, r_k=0.0, N_b=N_b, N_E=0, p0=1.0 - p1, p1=p1, h_tilde=decision
    )
    return TrialTrajectory(cycles=(record,), decision=decision, h_true=h)


def run_trial(
    params: ScenarioParams,
    receiver: ReceiverKind,
    h_true: int,
    rng: np.random.Generator,
    schedule: Optional[Schedule] = None,
    thermal_mean: Optional[float] = None,
    law: MuTotalLaw = MuTotalLaw.GAUSSIAN,
    count_threshold: int = 0,
) -> TrialTrajectory:
    """One full receiver trial under h_true

    FF-SFG squeezes each cycle from its current tentative decision and ends
    on the posterior argmax. SFG never squeezes and decides presence once
    the total count over all cycles exceeds ``count_threshold``.
    """
    receiver = ReceiverKind(receiver)
    if receiver is ReceiverKind.WEAK_SFG:
        return _weak_sfg_trial(params, h_true, rng, thermal_mean)
    if schedule is None:
        schedule = build_schedule(params)
    if receiver is ReceiverKind.FF_SFG:
        controller = FeedForwardController(params, rng, schedule, thermal_mean)
    else:
        controller = SfgController(
            params, rng, schedule, thermal_mean, count_threshold=count_threshold
        )
    return sample_trajectory(
        params, h_true, controller, rng, schedule=schedule, thermal_mean=thermal_mean, law=law
    )


@dataclass(frozen=True)
class _TrialBlock:
    params: ScenarioParams
    receiver: ReceiverKind
    h_true: int
    start: int
    stop: int
    seed: int
    stream: int
    thermal_mean: Optional[float]
    law: MuTotalLaw
    count_threshold: int


def _run_block(block: _TrialBlock) -> tuple[int, int]:
    schedule = (
        build_schedule(block.params) if block.receiver is not ReceiverKind.WEAK_SFG else None
    )
    errors = 0
    for index in range(block.start, block.stop):
        trajectory = run_trial(
            block.params,
            block.receiver,
            block.h_true,
            trial_rng(block.seed, block.h_true, index, block.stream),
            schedule=schedule,
            thermal_mean=block.thermal_mean,
            law=block.law,
            count_threshold=block.count_threshold,
        )
        errors += trajectory.is_error
    return block.h_true, errors


def wilson_interval(
    errors: int, trials: int, confidence: float = CONFIDENCE
) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError(f"Need at least one trial, got {trials}")
    if not 0 <= errors <= trials:
        raise ValueError(f"Error count {errors} outside [0, {trials}]")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = errors / trials
    denominator = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    low = 0.0 if errors == 0 else max(0.0, center - half)
    high = 1.0 if errors == trials else min(1.0, center + half)
    return low, high


def _blocks(
    total: int, h: int, workers: int, **common
) -> list[_TrialBlock]:
    size = max(1, math.ceil(total / (4 * workers)))
    return [
        _TrialBlock(h_true=h, start=start, stop=min(start + size, total), **common)
        for start in range(0, total, size)
    ]


def estimate_error(
    params: ScenarioParams,
    receiver: ReceiverKind,
    trials: int,
    seed: int,
    workers: Optional[int] = None,
    stream: int = 0,
    thermal_mean: Optional[float] = None,
    law: MuTotalLaw = MuTotalLaw.GAUSSIAN,
    count_threshold: int = 0,
    progress: bool = False,
) -> ErrorEstimate:
    """Equal-prior error probability with a 95% Wilson interval

    Half the trials run under each hypothesis. The result depends only on
    the arguments, never on ``workers``.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"Need at least {MIN_TRIALS} trials, got {trials}")
    receiver = ReceiverKind(receiver)
    workers = max(1, min(workers or settings.threads, settings.threads))
    absent = trials // 2
    common = dict(
        params=params,
        receiver=receiver,
        seed=seed,
        stream=stream,
        thermal_mean=thermal_mean,
        law=MuTotalLaw(law),
        count_threshold=count_threshold,
    )
    blocks = _blocks(absent, 0, workers, **common) + _blocks(
        trials - absent, 1, workers, **common
    )

    errors = {0: 0, 1: 0}
    bar = tqdm(
        total=len(blocks), desc=f"{receiver.value} M={params.M}", disable=not progress
    )
    if workers == 1:
        for block in blocks:
            h, count = _run_block(block)
            errors[h] += count
            bar.update()
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_run_block, block) for block in blocks]
            for future in as_completed(futures):
                h, count = future.result()
                errors[h] += count
                bar.update()
    bar.close()

    misses, false_alarms = errors[1], errors[0]
    p_hat = (misses + false_alarms) / trials
    low, high = wilson_interval(misses + false_alarms, trials)
    logger.info(
        "%s M=%d: p_hat=%.6g [%.6g, %.6g] over %d trials (seed %d)",
        receiver.value,
        params.M,
        p_hat,
        low,
        high,
        trials,
        seed,
    )
    return ErrorEstimate(
        p_hat=p_hat,
        ci_low=low,
        ci_high=high,
        trials=trials,
        seed=seed,
        misses=misses,
        false_alarms=false_alarms,
    )


def analytic_sfg_error(
    params: ScenarioParams, thermal_mean: Optional[float] = None
) -> float:
    """Equal-prior error of the zero-count SFG rule with independent cycles"""
    schedule = build_schedule(params)
    nbar = params.b_thermal_mean if thermal_mean is None else thermal_mean
    log_all_dark_absent = -schedule.K * math.log1p(nbar)
    log_all_dark_present = sum(
        log_p_b_pmf(0, params.M * lam * lam, nbar) - params.M * math.log1p(lam * lam)
        for lam in schedule.lambdas
    )
    false_alarm = -math.expm1(log_all_dark_absent)
    miss = math.exp(log_all_dark_present)
    return 0.5 * (false_alarm + miss)


def weak_sfg_analytic_error(
    params: ScenarioParams, thermal_mean: Optional[float] = None
) -> float:
    """[P(N_b=0 | h=1) + 1 - P(N_b=0 | h=0)] / 2 for one unsliced pass"""
    nbar = weak_sfg_thermal_mean(params) if thermal_mean is None else thermal_mean
    miss = p_b_pmf(0, params.M * params.C_p**2, nbar)
    false_alarm = 1.0 - p_b_pmf(0, 0.0, nbar)
    return 0.5 * (miss + false_alarm)


def coherent_photons_per_mode(params: ScenarioParams) -> float:
    """sum_k 2 lambda_k^2, the coherent total contributed by each mode pair"""
    q2 = params.depletion**2
    K = params.cycles
    return 2.0 * params.eta * params.C_p**2 * (1.0 - q2**K) / (1.0 - q2)


def solve_modes_for_coherent_total(params: ScenarioParams, N: float) -> int:
    """M giving a coherent total 2 M sum_k lambda_k^2 closest to N"""
    if N <= 0:
        raise SweepSpecError(f"Coherent total must be positive, got {N}")
    per_mode = coherent_photons_per_mode(params)
    if per_mode <= 0:
        raise SweepSpecError("No coherent photons per mode: kappa or N_S is zero")
    return max(1, round(N / per_mode))


def solve_modes_for_qcb(params: ScenarioParams, target: float) -> int:
    """M with exp(-M kappa N_S / N_B) / 2 = target"""
    if not 0.0 < target < 0.5:
        raise SweepSpecError(f"QCB target must lie in (0, 1/2), got {target}")
    if params.kappa == 0:
        raise SweepSpecError("QCB cannot be reached with kappa = 0")
    return max(1, round(params.N_B * math.log(1.0 / (2.0 * target)) / (params.kappa * params.N_S)))


def _row_params(spec: SweepSpec, value: float) -> ScenarioParams:
    if spec.mode is RunMode.FIG2A:
        if value < 1 or value != int(value):
            raise SweepSpecError(f"Mode count must be a positive integer, got {value}")
        return spec.base.model_copy(update={"M": int(value)})
    if spec.mode is RunMode.FIG2B:
        if spec.qcb_target is None:
            raise SweepSpecError("fig2b sweeps need a QCB target")
        if value <= 0:
            raise SweepSpecError(f"N_S must be positive, got {value}")
        candidate = ScenarioParams.model_validate(
            {**spec.base.model_dump(), "N_S": value}
        )
        M = solve_modes_for_qcb(candidate, spec.qcb_target)
        return candidate.model_copy(update={"M": M})
    raise SweepSpecError(f"Mode {spec.mode.value} is not a sweep")


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Estimates for each receiver plus comparator bounds at every sweep value"""
    if spec.mode not in (RunMode.FIG2A, RunMode.FIG2B):
        raise SweepSpecError(f"Mode {spec.mode.value} is not a sweep")
    rows = []
    for stream, value in enumerate(spec.values):
        params = _row_params(spec, value)
        N = params.qcb_exponent
        estimates = {
            receiver: estimate_error(
                params,
                receiver,
                spec.trials,
                spec.seed,
                workers=spec.workers,
                stream=stream,
                law=spec.law,
                count_threshold=spec.count_threshold,
                progress=spec.progress,
            )
            for receiver in spec.receivers
        }
        rows.append(
            SweepRow(
                sweep_value=float(value),
                params=params,
                estimates=estimates,
                opa=opa_qi_error(params),
                homodyne=homodyne_coherent_error(N),
                helstrom=helstrom_coherent_vs_vacuum(N),
                qcb=qcb_qi(params),
            )
        )
    return rows


def sweep_columns(mode: RunMode, receivers: tuple[ReceiverKind, ...]) -> tuple[str, ...]:
    columns = ["N_S"] if mode is RunMode.FIG2B else []
    columns.append("M")
    for receiver in receivers:
        name = receiver.column
        columns += [f"p_{name}", f"ci_lo_{name}", f"ci_hi_{name}"]
    columns += ["p_opa", "p_hom", "p_helstrom", "p_qcb"]
    if mode is RunMode.FIG2B:
        columns += [f"ratio_{receiver.column}" for receiver in receivers]
    return tuple(columns)


def _exponent_ratio(p_hat: float, qcb_exponent: float) -> float:
    if p_hat <= 0 or qcb_exponent <= 0:
        return math.nan
    return -math.log(2.0 * p_hat) / qcb_exponent


def sweep_table(spec: SweepSpec, rows: list[SweepRow]) -> ResultTable:
    table_rows = []
    for row in rows:
        cells: list = [row.params.N_S] if spec.mode is RunMode.FIG2B else []
        cells.append(row.M)
        for receiver in spec.receivers:
            estimate = row.estimates[receiver]
            cells += [estimate.p_hat, estimate.ci_low, estimate.ci_high]
        cells += [
            row.opa.error_probability,
            row.homodyne.error_probability,
            row.helstrom.error_probability,
            row.qcb.error_probability,
        ]
        if spec.mode is RunMode.FIG2B:
            cells += [
                _exponent_ratio(row.estimates[receiver].p_hat, row.params.qcb_exponent)
                for receiver in spec.receivers
            ]
        table_rows.append(tuple(cells))
    return ResultTable(
        columns=sweep_columns(spec.mode, spec.receivers),
        rows=table_rows,
        comments=(f"seed={spec.seed}", f"trials={spec.trials}"),
    )


def trajectory_table(trajectory: TrialTrajectory, seed: int) -> ResultTable:
    return ResultTable(
        columns=TRAJECTORY_COLUMNS,
        rows=[
            (c.k, c.r_k, c.N_b, c.N_E, c.p0, c.p1, c.h_tilde)
            for c in trajectory.cycles
        ],
        comments=(
            f"seed={seed}",
            f"h_true={trajectory.h_true}",
            f"decision={trajectory.decision}",
        ),
    )
