from .hypothesis import Hypothesis
from .receiver import ReceiverKind
from .run_mode import RunMode, MuTotalLaw

__all__ = ["Hypothesis", "ReceiverKind", "RunMode", "MuTotalLaw"]
