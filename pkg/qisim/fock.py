"""Truncated Fock-space integrator for the M-pair SFG interaction

The state is carried as a weighted ensemble of pure components taken from
the eigen-decomposition of the initial product density operator. Each
component is integrated with fixed-step RK4 and all moments are computed
as weighted traces against pair 1.
"""

import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence
import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm
from qisim.csv_io import ResultTable
from qisim.exceptions import FockDimensionError, TraceDriftError
from qisim.models import FockConfig, ModePairMoments, SfgQubitState
from qisim.sfg import analytic_series

logger = logging.getLogger(__name__)

MAX_DIMENSION = 2**16
MAX_PAIRS = 3
TRACE_TOLERANCE = 1e-6
# Extra levels kept while squeezing before projecting onto the cutoff
_SQUEEZE_HEADROOM = 8
_WEIGHT_FLOOR = 1e-12

SERIES_COLUMNS = (
    "t",
    "re_C",
    "im_C",
    "re_b",
    "im_b",
    "n_b",
    "n_si",
    "re_F",
    "im_F",
    "re_G",
    "im_G",
    "n_s",
    "n_i",
)


@dataclass(frozen=True)
class MomentSeries:
    """Moments of an SFG run sampled at increasing times"""

    times: np.ndarray
    states: tuple[SfgQubitState, ...]
    M: int
    g: float

    def __len__(self) -> int:
        return len(self.states)

    @property
    def phase(self) -> np.ndarray:
        """sqrt(M) g t, the argument the qubit solution depends on"""
        return math.sqrt(self.M) * self.g * np.asarray(self.times)

    def scaled_traces(self) -> dict[str, np.ndarray]:
        """n_b/[M|C0|^2 + n_s0 n_i0], Re[C/C0] and Im[b/(sqrt(M) C0)]"""
        first = self.states[0]
        C0 = first.C
        peak = self.M * abs(C0) ** 2 + first.n_s * first.n_i
        n_b = np.array([s.n_b for s in self.states])
        C = np.array([s.C for s in self.states])
        b = np.array([s.b for s in self.states])
        return {
            "n_b": n_b / peak if peak else n_b,
            "C": (C / C0).real if C0 else C.real,
            "b": (b / (math.sqrt(self.M) * C0)).imag if C0 else b.imag,
        }

    def rows(self) -> list[tuple[float, ...]]:
        return [
            (
                float(t),
                s.C.real,
                s.C.imag,
                s.b.real,
                s.b.imag,
                s.n_b,
                s.n_si,
                s.F.real,
                s.F.imag,
                s.G.real,
                s.G.imag,
                s.n_s,
                s.n_i,
            )
            for t, s in zip(self.times, self.states)
        ]

    def to_table(self) -> ResultTable:
        return ResultTable(
            columns=SERIES_COLUMNS,
            rows=self.rows(),
            comments=(f"M={self.M}", f"g={self.g!r}"),
        )


def analytic_moment_series(
    initial: SfgQubitState, g: float, M: int, times: Iterable[float]
) -> MomentSeries:
    grid = np.asarray(list(times), dtype=float)
    return MomentSeries(
        times=grid, states=tuple(analytic_series(initial, g, M, grid)), M=M, g=g
    )


def _annihilation(truncation: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, truncation)), 1, format="csr")


def _embed(op: sp.spmatrix, position: int, modes: int, truncation: int) -> sp.csr_matrix:
    left = sp.identity(truncation**position, format="csr")
    right = sp.identity(truncation ** (modes - position - 1), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def hilbert_dimension(config: FockConfig) -> int:
    return config.truncation ** (2 * config.M + 1)


def _check_dimension(config: FockConfig) -> int:
    dimension = hilbert_dimension(config)
    if dimension > MAX_DIMENSION:
        raise FockDimensionError(
            f"Fock space of {2 * config.M + 1} modes at cutoff {config.truncation} "
            f"has dimension {dimension} > {MAX_DIMENSION}"
        )
    return dimension


class _ModeOperators:
    """Ladder operators of [b, S1, I1, S2, I2, ...] on the truncated space"""

    def __init__(self, config: FockConfig):
        _check_dimension(config)
        self.M = config.M
        self.truncation = config.truncation
        self.modes = 2 * config.M + 1
        a = _annihilation(config.truncation)
        self.b = _embed(a, 0, self.modes, self.truncation)
        self.signal = [
            _embed(a, 1 + 2 * m, self.modes, self.truncation) for m in range(config.M)
        ]
        self.idler = [
            _embed(a, 2 + 2 * m, self.modes, self.truncation) for m in range(config.M)
        ]

    def pair(self, m: int) -> sp.csr_matrix:
        return (self.signal[m] @ self.idler[m]).tocsr()


def build_hamiltonian(config: FockConfig, g: float) -> sp.csr_matrix:
    """g * sum_m (b^dag a_Sm a_Im + h.c.) in units with hbar = 1

    Raises:
        FockDimensionError: the truncated space exceeds MAX_DIMENSION
    """
    ops = _ModeOperators(config)
    coupling = sp.csr_matrix(ops.b.shape, dtype=complex)
    for m in range(config.M):
        coupling = coupling + ops.b.conj().T @ ops.pair(m)
    hamiltonian = g * (coupling + coupling.conj().T)
    hamiltonian.eliminate_zeros()
    return hamiltonian.tocsr()


def _thermal_occupations(moments: ModePairMoments) -> tuple[float, float, float]:
    """Thermal means (m1, m2) and squeeze r with S(r) rho_th S(r)^dag = rho_pair"""
    total = moments.n_s + moments.n_i + 1.0
    D = math.sqrt(max(total * total - 4.0 * moments.C_si**2, 0.0))
    m1 = max((D - 1.0 + moments.n_s - moments.n_i) / 2.0, 0.0)
    m2 = max((D - 1.0 - moments.n_s + moments.n_i) / 2.0, 0.0)
    r = 0.5 * math.atanh(2.0 * moments.C_si / total)
    return m1, m2, r


def _thermal_populations(mean: float, levels: int) -> np.ndarray:
    n = np.arange(levels)
    if mean == 0:
        return (n == 0).astype(float)
    return (mean / (1.0 + mean)) ** n / (1.0 + mean)


def pair_density(moments: ModePairMoments, truncation: int) -> np.ndarray:
    """Two-mode squeezed thermal state with the given moments, truncated

    Built at a larger cutoff, projected onto `truncation` levels per mode and
    renormalized. Basis ordering is |n_S> (x) |n_I>.
    """
    moments.validate()
    levels = truncation + _SQUEEZE_HEADROOM
    m1, m2, r = _thermal_occupations(moments)
    a = _annihilation(levels).toarray()
    eye = np.eye(levels)
    a_s = np.kron(a, eye)
    a_i = np.kron(eye, a)
    squeeze = expm(r * (a_s.conj().T @ a_i.conj().T - a_s @ a_i))
    thermal = np.diag(
        np.kron(_thermal_populations(m1, levels), _thermal_populations(m2, levels))
    )
    rho = squeeze @ thermal @ squeeze.conj().T

    keep = np.array(
        [i * levels + j for i in range(truncation) for j in range(truncation)]
    )
    rho = rho[np.ix_(keep, keep)]
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def _pair_ensemble(moments: ModePairMoments, truncation: int) -> tuple[np.ndarray, np.ndarray]:
    weights, vectors = np.linalg.eigh(pair_density(moments, truncation))
    keep = weights > _WEIGHT_FLOOR
    return weights[keep], vectors[:, keep]


def initial_ensemble(
    moments: ModePairMoments, config: FockConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Weights and pure components (columns) of b-vacuum (x) M identical pairs"""
    weights, vectors = _pair_ensemble(moments, config.truncation)
    vacuum = np.zeros(config.truncation)
    vacuum[0] = 1.0

    kept_weights, columns = [], []
    dropped = 0.0
    for combo in product(range(len(weights)), repeat=config.M):
        weight = float(np.prod(weights[list(combo)]))
        if weight < _WEIGHT_FLOOR:
            dropped += weight
            continue
        state = vacuum
        for index in combo:
            state = np.kron(state, vectors[:, index])
        kept_weights.append(weight)
        columns.append(state)

    logger.debug(
        "Fock ensemble: %d components kept, dropped weight %.3g",
        len(columns),
        dropped,
    )
    w = np.array(kept_weights)
    return w / w.sum(), np.array(columns, dtype=complex).T


def _rk4_step(hamiltonian: sp.csr_matrix, psi: np.ndarray, h: float) -> np.ndarray:
    def rhs(x: np.ndarray) -> np.ndarray:
        return -1j * (hamiltonian @ x)

    k1 = rhs(psi)
    k2 = rhs(psi + 0.5 * h * k1)
    k3 = rhs(psi + 0.5 * h * k2)
    k4 = rhs(psi + h * k3)
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _expectation(op: sp.spmatrix, psi: np.ndarray, weights: np.ndarray) -> complex:
    return complex(np.sum(weights * np.sum(psi.conj() * (op @ psi), axis=0)))


class _MomentReader:
    def __init__(self, ops: _ModeOperators):
        pair = ops.pair(0)
        n_s = (ops.signal[0].conj().T @ ops.signal[0]).tocsr()
        n_i = (ops.idler[0].conj().T @ ops.idler[0]).tocsr()
        self.n_s = n_s
        self.n_i = n_i
        self.n_si = (n_s @ n_i).tocsr()
        self.pair = pair
        self.b = ops.b
        self.n_b = (ops.b.conj().T @ ops.b).tocsr()
        self.F = (pair.conj().T @ ops.b).tocsr()
        self.G = (pair @ ops.pair(1).conj().T).tocsr() if ops.M > 1 else None

    def read(self, psi: np.ndarray, weights: np.ndarray) -> SfgQubitState:
        return SfgQubitState(
            C=_expectation(self.pair, psi, weights),
            b=_expectation(self.b, psi, weights),
            n_b=_expectation(self.n_b, psi, weights).real,
            n_si=_expectation(self.n_si, psi, weights).real,
            F=_expectation(self.F, psi, weights),
            G=(
                _expectation(self.G, psi, weights)
                if self.G is not None
                else complex(math.nan, math.nan)
            ),
            n_s=_expectation(self.n_s, psi, weights).real,
            n_i=_expectation(self.n_i, psi, weights).real,
        )


def _trace(psi: np.ndarray, weights: np.ndarray) -> float:
    return float(np.sum(weights * np.sum(np.abs(psi) ** 2, axis=0)))


def density_matrix(weights: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """rho = sum_j w_j |psi_j><psi_j| over the ensemble columns"""
    return (psi * weights) @ psi.conj().T


def _check_pairs(config: FockConfig) -> None:
    if config.M > MAX_PAIRS:
        raise ValueError(f"Fock validation supports at most {MAX_PAIRS} pairs")


def _integrate(
    hamiltonian: sp.csr_matrix,
    weights: np.ndarray,
    psi: np.ndarray,
    grid: np.ndarray,
    step: float,
) -> Iterator[np.ndarray]:
    """Ensemble components at each grid time, trace-checked"""
    now = 0.0
    for target in grid:
        interval = target - now
        if interval > 0:
            steps = max(1, math.ceil(interval / step - 1e-9))
            h = interval / steps
            for _ in range(steps):
                psi = _rk4_step(hamiltonian, psi, h)
            now = target
        drift = abs(_trace(psi, weights) - 1.0)
        if not drift <= TRACE_TOLERANCE:
            raise TraceDriftError(
                f"Trace drifted by {drift:.3g} at t={target:.6g}; "
                "reduce dt or raise the truncation"
            )
        yield psi


def evolve_ensemble(
    initial_moments: ModePairMoments,
    config: FockConfig,
    g: float = 1.0,
    t: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Weights and evolved components at time t (default config.end_time(g))

    Raises the same errors as `fock_evolve`.
    """
    _check_pairs(config)
    hamiltonian = build_hamiltonian(config, g)
    weights, psi = initial_ensemble(initial_moments, config)
    end = config.end_time(g) if t is None else t
    if end < 0:
        raise ValueError("Evolution time must be non-negative")
    psi = next(_integrate(hamiltonian, weights, psi, np.array([end]), config.step(g)))
    return weights, psi


def fock_evolve(
    initial_moments: ModePairMoments,
    config: FockConfig,
    g: float = 1.0,
    times: Optional[Sequence[float]] = None,
) -> MomentSeries:
    """Integrate the SFG Schrodinger equation and sample the moments

    Args:
        initial_moments: per-pair (n_s, n_i, C) of the Gaussian input pairs
        config: cutoff, step and end time
        g: coupling rate
        times: output times; defaults to `config.samples` points on
            [0, config.end_time(g)]

    Raises:
        ValueError: more than three pairs
        FockDimensionError: the truncated space is too large
        TraceDriftError: |tr rho - 1| exceeded TRACE_TOLERANCE
    """
    _check_pairs(config)
    ops = _ModeOperators(config)
    hamiltonian = build_hamiltonian(config, g)
    reader = _MomentReader(ops)
    weights, psi = initial_ensemble(initial_moments, config)

    if times is None:
        grid = np.linspace(0.0, config.end_time(g), config.samples)
    else:
        grid = np.asarray(times, dtype=float)
        if np.any(grid < 0) or np.any(np.diff(grid) < 0):
            raise ValueError("Output times must be non-negative and non-decreasing")

    states = [
        reader.read(components, weights)
        for components in _integrate(hamiltonian, weights, psi, grid, config.step(g))
    ]
    return MomentSeries(times=grid, states=tuple(states), M=config.M, g=g)


def max_scaled_deviation(first: MomentSeries, second: MomentSeries) -> dict[str, float]:
    """Largest |difference| of each scaled trace relative to its peak"""
    a, b = first.scaled_traces(), second.scaled_traces()
    deviations = {}
    for key in a:
        peak = max(np.max(np.abs(a[key])), np.max(np.abs(b[key])))
        diff = np.max(np.abs(a[key] - b[key]))
        deviations[key] = float(diff / peak) if peak else float(diff)
    return deviations
