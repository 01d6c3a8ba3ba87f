from typing import TYPE_CHECKING
from sqlalchemy.orm import Mapped, mapped_column, relationship
from sqlalchemy import Text
from sqlalchemy import Enum as SQLEnum
from qisim.enums import RunMode
from .base import BaseModel

if TYPE_CHECKING:
    from .sweep_point import SweepPoint


class SimulationRun(BaseModel):
    """One stored sweep with the config text that produced it"""

    __tablename__ = "runs"

    id: Mapped[int] = mapped_column(primary_key=True)
    mode: Mapped[RunMode] = mapped_column(SQLEnum(RunMode))
    seed: Mapped[int]
    trials: Mapped[int]
    config_text: Mapped[str] = mapped_column(Text)
    points: Mapped[list["SweepPoint"]] = relationship(
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="SweepPoint.id",
    )

    def __repr__(self) -> str:
        return f"<SimulationRun(id={self.id}, mode='{self.mode}', seed={self.seed})>"
