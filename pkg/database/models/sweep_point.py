from typing import TYPE_CHECKING
from sqlalchemy.orm import Mapped, mapped_column, relationship
from sqlalchemy import BigInteger, ForeignKey
from .base import BaseModel

if TYPE_CHECKING:
    from .run import SimulationRun
    from .receiver_estimate import ReceiverEstimate


class SweepPoint(BaseModel):
    """Comparator bounds at one sweep value"""

    __tablename__ = "sweep_points"

    id: Mapped[int] = mapped_column(primary_key=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("runs.id"))
    run: Mapped["SimulationRun"] = relationship(back_populates="points")
    sweep_value: Mapped[float]
    M: Mapped[int] = mapped_column(BigInteger)
    N_S: Mapped[float]
    p_opa: Mapped[float]
    p_hom: Mapped[float]
    p_helstrom: Mapped[float]
    p_qcb: Mapped[float]
    estimates: Mapped[list["ReceiverEstimate"]] = relationship(
        back_populates="sweep_point",
        cascade="all, delete-orphan",
        order_by="ReceiverEstimate.id",
    )

    def __repr__(self) -> str:
        return f"<SweepPoint(id={self.id}, run_id={self.run_id}, M={self.M})>"
