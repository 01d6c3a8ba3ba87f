from typing import TYPE_CHECKING
from sqlalchemy.orm import Mapped, mapped_column, relationship
from sqlalchemy import ForeignKey
from sqlalchemy import Enum as SQLEnum
from qisim.enums import ReceiverKind
from .base import BaseModel

if TYPE_CHECKING:
    from .sweep_point import SweepPoint


class ReceiverEstimate(BaseModel):
    """Monte Carlo error estimate of one receiver at one sweep point"""

    __tablename__ = "receiver_estimates"

    id: Mapped[int] = mapped_column(primary_key=True)
    sweep_point_id: Mapped[int] = mapped_column(ForeignKey("sweep_points.id"))
    sweep_point: Mapped["SweepPoint"] = relationship(back_populates="estimates")
    receiver: Mapped[ReceiverKind] = mapped_column(SQLEnum(ReceiverKind))
    p_hat: Mapped[float]
    ci_low: Mapped[float]
    ci_high: Mapped[float]
    trials: Mapped[int]
    errors: Mapped[int]
