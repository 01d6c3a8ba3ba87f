from .base import BaseModel, Base
from .run import SimulationRun
from .sweep_point import SweepPoint
from .receiver_estimate import ReceiverEstimate

__all__ = [
    "BaseModel",
    "Base",
    "SimulationRun",
    "SweepPoint",
    "ReceiverEstimate",
]
