from fastapi import APIRouter, Depends, HTTPException, status
from database.repositories.run import (
    RunRepository,
    SweepPointRepository,
    get_run_repo,
    get_sweep_point_repo,
)
from api.v1.schemas.run import RunDetailResponse, RunResponse, SweepPointResponse

router = APIRouter(prefix="/runs", tags=["runs"])


@router.get("/", response_model=list[RunResponse])
def read_all(
    repo: RunRepository = Depends(get_run_repo),
) -> list[RunResponse]:
    """Gets all stored runs

    Args:
        repo (RunRepository, optional): Handles DB actions. Defaults to Depends(get_run_repo).

    Returns:
        list[RunResponse]: Every run, oldest first
    """
    return repo.get_all()


@router.get("/{run_id}", response_model=RunDetailResponse)
def get_run(
    run_id: int,
    repo: RunRepository = Depends(get_run_repo),
) -> RunDetailResponse:
    """Gets one run based on id

    Raises:
        HTTPException_404: Run not found from ID
    """
    run = repo.get_one(id=run_id)
    if not run:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} not found",
        )
    return run


@router.get("/{run_id}/points", response_model=list[SweepPointResponse])
def get_points(
    run_id: int,
    repo: RunRepository = Depends(get_run_repo),
    points: SweepPointRepository = Depends(get_sweep_point_repo),
) -> list[SweepPointResponse]:
    """Gets the sweep points of a run with their receiver estimates

    Raises:
        HTTPException_404: Run not found from ID
    """
    if not repo.count(id=run_id):
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} not found",
        )
    return points.get_all(run_id=run_id)


@router.delete("/{run_id}", status_code=status.HTTP_204_NO_CONTENT)
def delete_run(
    run_id: int,
    repo: RunRepository = Depends(get_run_repo),
) -> None:
    """Deletes a run together with its points and estimates

    Raises:
        HTTPException_404: Run to be deleted not found
    """
    run = repo.get_one(id=run_id)
    if not run:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} not found",
        )
    repo.delete(run)
