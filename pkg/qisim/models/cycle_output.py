from dataclasses import dataclass
from .moments import ModePairMoments


@dataclass(frozen=True, slots=True)
class CycleOutput:
    """Result of one slice / S(r_k) / SFG / S(-r_k) / recombine / S(eps_k) cycle"""

    out_moments: ModePairMoments
    b_amp: complex
    b_thermal: float
    e_mean_per_mode: float
    r_effective: float

    @property
    def b_coherent_mean(self) -> float:
        return abs(self.b_amp) ** 2
