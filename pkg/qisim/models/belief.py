from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class BeliefState:
    """Posterior pair and tentative decision entering cycle k"""

    p0: float
    p1: float
    h_tilde: int
    k: int = 0

    def __post_init__(self) -> None:
        if not (0.0 <= self.p0 <= 1.0 and 0.0 <= self.p1 <= 1.0):
            raise ValueError(f"Probabilities out of range: ({self.p0}, {self.p1})")
        if abs(self.p0 + self.p1 - 1.0) > 1e-12:
            raise ValueError(f"Posterior not normalised: {self.p0} + {self.p1}")
        if self.h_tilde not in (0, 1):
            raise ValueError(f"Tentative decision must be 0 or 1, got {self.h_tilde}")

    @property
    def leader(self) -> int | None:
        """The strictly more probable hypothesis, None on an exact tie"""
        if self.p1 > self.p0:
            return 1
        if self.p0 > self.p1:
            return 0
        return None
