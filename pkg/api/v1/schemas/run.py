from pydantic import BaseModel, ConfigDict, Field
from datetime import datetime
from qisim.enums import ReceiverKind, RunMode


class RunBase(BaseModel):
    """Base run schema"""

    mode: RunMode = Field(..., description="Sweep mode")
    seed: int = Field(..., description="Master seed")
    trials: int = Field(..., description="Trials per receiver and point")


# Responses
class RunResponse(RunBase):
    """Stored run without its points"""

    id: int
    created_at: datetime
    updated_at: datetime

    model_config = ConfigDict(from_attributes=True)


class RunDetailResponse(RunResponse):
    """Stored run including the config text it was produced from"""

    config_text: str


class ReceiverEstimateResponse(BaseModel):
    receiver: ReceiverKind
    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    errors: int

    model_config = ConfigDict(from_attributes=True)


class SweepPointResponse(BaseModel):
    """One sweep point with comparator bounds and receiver estimates"""

    id: int
    sweep_value: float
    M: int
    N_S: float
    p_opa: float
    p_hom: float
    p_helstrom: float
    p_qcb: float
    estimates: list[ReceiverEstimateResponse] = Field(default_factory=list)

    model_config = ConfigDict(from_attributes=True)
