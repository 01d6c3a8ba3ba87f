import math
from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class BoundResult:
    """An error probability with its exponent -ln(2 P_err)"""

    error_probability: float
    label: str
    exponent: float = field(init=False)

    def __post_init__(self) -> None:
        p = self.error_probability
        exponent = math.inf if p <= 0.0 else -math.log(2.0 * p)
        object.__setattr__(self, "exponent", exponent)
