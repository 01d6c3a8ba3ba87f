from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ErrorEstimate:
    """Monte Carlo error probability with a 95% Wilson interval"""

    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int
    misses: int = 0
    false_alarms: int = 0

    @property
    def errors(self) -> int:
        return self.misses + self.false_alarms
