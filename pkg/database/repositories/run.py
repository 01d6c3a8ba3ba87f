from fastapi import Depends
from sqlalchemy.orm import Session
from database.crud.base import CRUDRepository
from database.db import get_db_session
from database.models import ReceiverEstimate, SimulationRun, SweepPoint
from qisim.config import RunConfig
from qisim.models import SweepRow


class RunRepository(CRUDRepository[SimulationRun]):
    """Repository for stored simulation runs"""

    def __init__(self, db_session: Session):
        super().__init__(SimulationRun, db_session)

    def store_sweep(
        self, config: RunConfig, config_text: str, rows: list[SweepRow]
    ) -> SimulationRun:
        """Persists a run with all its points and estimates in one commit"""
        run = SimulationRun(
            mode=config.mode,
            seed=config.seed,
            trials=config.trials,
            config_text=config_text,
        )
        for row in rows:
            point = SweepPoint(
                sweep_value=row.sweep_value,
                M=row.M,
                N_S=row.params.N_S,
                p_opa=row.opa.error_probability,
                p_hom=row.homodyne.error_probability,
                p_helstrom=row.helstrom.error_probability,
                p_qcb=row.qcb.error_probability,
            )
            point.estimates = [
                ReceiverEstimate(
                    receiver=receiver,
                    p_hat=estimate.p_hat,
                    ci_low=estimate.ci_low,
                    ci_high=estimate.ci_high,
                    trials=estimate.trials,
                    errors=estimate.errors,
                )
                for receiver, estimate in row.estimates.items()
            ]
            run.points.append(point)
        self.db_session.add(run)
        self.db_session.commit()
        self.db_session.refresh(run)
        return run


class SweepPointRepository(CRUDRepository[SweepPoint]):
    def __init__(self, db_session: Session):
        super().__init__(SweepPoint, db_session)


def get_run_repo(
    session=Depends(get_db_session),
) -> RunRepository:
    """Run repository dependency"""
    return RunRepository(session)


def get_sweep_point_repo(
    session=Depends(get_db_session),
) -> SweepPointRepository:
    """Sweep point repository dependency"""
    return SweepPointRepository(session)
