from typing import Optional


class QisimError(Exception):
    """Base class for every error raised by the simulator"""


class ConfigError(QisimError):
    """A run configuration could not be parsed or failed validation"""

    def __init__(
        self, message: str, key: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        self.key = key
        self.line = line
        location = f"line {line}: " if line is not None else ""
        subject = f"{key}: " if key else ""
        super().__init__(f"{location}{subject}{message}")


class UnphysicalStateError(QisimError, ValueError):
    """Second moments that no quantum state can have"""


class ModelViolationError(QisimError):
    """Observed counts that the count model assigns zero probability"""


class TraceDriftError(QisimError):
    """The Fock-space integrator lost normalisation"""


class FockDimensionError(QisimError, ValueError):
    """Truncated Fock space too large to allocate"""


class SweepSpecError(QisimError, ValueError):
    """A sweep specification that cannot be satisfied"""


class RegimeWarning(UserWarning):
    """Parameters outside the low-brightness regime the models assume"""
