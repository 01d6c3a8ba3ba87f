from dataclasses import dataclass, field
from typing import Optional
from qisim.enums import MuTotalLaw, ReceiverKind, RunMode
from .bound_result import BoundResult
from .estimate import ErrorEstimate
from .scenario import ScenarioParams


@dataclass(frozen=True)
class SweepSpec:
    """A sweep over M, or over N_S at a fixed QCB"""

    mode: RunMode
    base: ScenarioParams
    values: tuple[float, ...]
    receivers: tuple[ReceiverKind, ...] = (ReceiverKind.SFG, ReceiverKind.FF_SFG)
    trials: int = 100_000
    seed: int = 0
    qcb_target: Optional[float] = None
    workers: Optional[int] = None
    law: MuTotalLaw = MuTotalLaw.GAUSSIAN
    count_threshold: int = 0
    progress: bool = False


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    params: ScenarioParams
    estimates: dict[ReceiverKind, ErrorEstimate] = field(default_factory=dict)
    opa: Optional[BoundResult] = None
    homodyne: Optional[BoundResult] = None
    helstrom: Optional[BoundResult] = None
    qcb: Optional[BoundResult] = None

    @property
    def M(self) -> int:
        return self.params.M
