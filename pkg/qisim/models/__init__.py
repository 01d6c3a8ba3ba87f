from .scenario import ScenarioParams
from .moments import ModePairMoments
from .covariance import WignerCovariance, VACUUM_VARIANCE
from .sfg_state import SfgQubitState
from .fock_config import FockConfig
from .cycle_output import CycleOutput
from .belief import BeliefState
from .schedule import Schedule
from .counts import CountLikelihoodParams, CountRecord
from .trajectory import CycleRecord, TrialTrajectory
from .estimate import ErrorEstimate
from .bound_result import BoundResult
from .sweep import SweepSpec, SweepRow

__all__ = [
    "ScenarioParams",
    "ModePairMoments",
    "WignerCovariance",
    "VACUUM_VARIANCE",
    "SfgQubitState",
    "FockConfig",
    "CycleOutput",
    "BeliefState",
    "Schedule",
    "CountLikelihoodParams",
    "CountRecord",
    "CycleRecord",
    "TrialTrajectory",
    "ErrorEstimate",
    "BoundResult",
    "SweepSpec",
    "SweepRow",
]
