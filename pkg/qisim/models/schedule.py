from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class Schedule:
    """Per-cycle coherent amplitude scales lambda_k and photon totals

    ``cumulative`` holds the prefix sums sum_{l<=k} lambda_l^2 used by the
    feed-forward law.
    """

    lambdas: np.ndarray
    K: int
    epsilon: float
    M: int
    N_T_coh: float
    N_T_therm: float
    N_T_coh_asymptotic: float
    cumulative: np.ndarray

    def __post_init__(self) -> None:
        for name in ("lambdas", "cumulative"):
            values = np.array(getattr(self, name), dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    def __len__(self) -> int:
        return self.K
