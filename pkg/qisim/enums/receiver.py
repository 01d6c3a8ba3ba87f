from enum import Enum


class ReceiverKind(str, Enum):
    """Receivers the harness can simulate"""

    SFG = "sfg"
    FF_SFG = "ff-sfg"
    WEAK_SFG = "weak-sfg"

    @property
    def column(self) -> str:
        """Short name used in CSV column headers"""
        return self.value.replace("-", "")
