from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class CycleRecord:
    """One cycle of a trial: squeeze used, counts, posterior after update"""

    k: int
    r_k: float
    N_b: int
    N_E: int
    p0: float
    p1: float
    h_tilde: int


@dataclass(frozen=True)
class TrialTrajectory:
    """The full K-cycle record of one Monte Carlo trial"""

    cycles: tuple[CycleRecord, ...]
    decision: int
    h_true: int

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def is_error(self) -> bool:
        return self.decision != self.h_true

    @property
    def total_counts(self) -> int:
        return sum(cycle.N_b + cycle.N_E for cycle in self.cycles)
