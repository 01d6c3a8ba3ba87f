from typing import Optional
from pydantic import BaseModel, Field


class ScenarioRequest(BaseModel):
    """Scenario parameters; omitted fields take the simulator defaults"""

    N_S: Optional[float] = Field(None, description="Mean signal photons per mode")
    kappa: Optional[float] = Field(None, description="Roundtrip transmissivity")
    N_B: Optional[float] = Field(None, description="Mean background photons per mode")
    M: Optional[int] = Field(None, description="Number of mode pairs")
    eta: Optional[float] = Field(None, description="Slicing transmissivity")
    epsilon: Optional[float] = Field(None, description="Termination residual fraction")
    K: Optional[int] = Field(None, description="Number of cycles")


class BoundResponse(BaseModel):
    error_probability: float
    exponent: Optional[float] = Field(None, description="-ln(2 P_err); null when P_err is 0")


class BoundsResponse(BaseModel):
    """Closed-form comparators and the derived receiver schedule"""

    C_p: float
    K: int
    epsilon: float
    N_T_coh: float
    N_T_therm: float
    bounds: dict[str, BoundResponse]
