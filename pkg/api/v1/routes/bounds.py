import math
from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError
from api.v1.schemas.bounds import BoundResponse, BoundsResponse, ScenarioRequest
from qisim.bounds import scenario_bounds
from qisim.controller import build_schedule
from qisim.models import ScenarioParams

router = APIRouter(prefix="/bounds", tags=["bounds"])


@router.post("/", response_model=BoundsResponse)
def compute_bounds(scenario: ScenarioRequest) -> BoundsResponse:
    """Computes the closed-form bounds for a scenario

    Raises:
        HTTPException_422: Parameters outside their valid ranges
    """
    try:
        params = ScenarioParams(**scenario.model_dump(exclude_none=True))
    except ValidationError as exc:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"Invalid scenario: {exc.errors()[0]['msg']}",
        )
    schedule = build_schedule(params)
    return BoundsResponse(
        C_p=params.C_p,
        K=schedule.K,
        epsilon=schedule.epsilon,
        N_T_coh=schedule.N_T_coh,
        N_T_therm=schedule.N_T_therm,
        bounds={
            label: BoundResponse(
                error_probability=result.error_probability,
                exponent=result.exponent if math.isfinite(result.exponent) else None,
            )
            for label, result in scenario_bounds(params).items()
        },
    )
