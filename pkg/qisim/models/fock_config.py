import math
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field

DEFAULT_STEPS = 2000


class FockConfig(BaseModel):
    """Truncated Fock-space integration settings"""

    model_config = ConfigDict(frozen=True)

    M: int = Field(..., ge=1, description="Number of signal-idler pairs")
    truncation: int = Field(4, ge=2, description="Per-mode Fock cutoff")
    dt: Optional[float] = Field(None, gt=0, description="RK4 step")
    t_final: Optional[float] = Field(None, gt=0, description="End time")
    samples: int = Field(101, ge=2, description="Number of output times")

    def quarter_period(self, g: float) -> float:
        return math.pi / (2.0 * math.sqrt(self.M) * g)

    def end_time(self, g: float) -> float:
        return self.t_final if self.t_final is not None else self.quarter_period(g)

    def step(self, g: float) -> float:
        if self.dt is not None:
            return self.dt
        return self.quarter_period(g) / DEFAULT_STEPS
