from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class CountLikelihoodParams:
    """Count-law parameters of one cycle under one hypothesis

    coherent_mean = M r~^2, thermal_mean = eta N_B N_S, e_per_mode = r~^2.
    """

    coherent_mean: float
    thermal_mean: float
    e_per_mode: float
    modes: int

    def __post_init__(self) -> None:
        if min(self.coherent_mean, self.thermal_mean, self.e_per_mode) < 0:
            raise ValueError(f"Negative count-law parameter in {self!r}")


@dataclass(frozen=True, slots=True)
class CountRecord:
    """Photon counts of one cycle"""

    N_b: int
    N_E: int
    k: int = 0

    def __post_init__(self) -> None:
        if self.N_b < 0 or self.N_E < 0:
            raise ValueError(f"Counts must be non-negative, got {self!r}")

    @property
    def total(self) -> int:
        return self.N_b + self.N_E
