import math
import warnings
from typing import Any, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from qisim.exceptions import RegimeWarning

DEFAULT_CYCLES = 42
# "much less than" is read as a factor of ten below
REGIME_RATIO = 0.1


class ScenarioParams(BaseModel):
    """Physical and receiver parameters of one QI target-detection scenario

    Exactly one of ``epsilon`` and ``K`` is stored; the other is derived from
    K = ceil(-ln(epsilon) / (2 eta N_B)). When neither is given the receiver
    runs K = 42 cycles.
    """

    model_config = ConfigDict(frozen=True)

    N_S: float = Field(1e-4, gt=0, description="Mean signal photons per mode")
    kappa: float = Field(0.01, ge=0, le=1, description="Roundtrip transmissivity")
    N_B: float = Field(20.0, gt=0, description="Mean background photons per mode")
    M: int = Field(10_000_000, ge=0, description="Number of signal-idler mode pairs")
    eta: float = Field(
        0.002, gt=0, lt=1, description="Slicing beam-splitter transmissivity"
    )
    epsilon: Optional[float] = Field(
        None, gt=0, lt=1, description="Termination residual fraction"
    )
    K: Optional[int] = Field(None, ge=1, description="Number of receiver cycles")
    prior_h1: float = Field(
        0.5, gt=0, lt=1, description="Prior probability of target presence"
    )
    g: float = Field(1.0, gt=0, description="SFG interaction strength")

    @model_validator(mode="before")
    @classmethod
    def _one_of_epsilon_or_cycles(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        has_epsilon = data.get("epsilon") is not None
        has_cycles = data.get("K") is not None
        if has_epsilon and has_cycles:
            raise ValueError("supply either epsilon or K, not both")
        if not has_epsilon and not has_cycles:
            data = {**data, "K": DEFAULT_CYCLES}
        return data

    @model_validator(mode="after")
    def _warn_outside_regime(self) -> "ScenarioParams":
        for violation in self.regime_violations():
            warnings.warn(violation, RegimeWarning, stacklevel=2)
        return self

    @property
    def C_p(self) -> float:
        """Phase-sensitive cross correlation under target presence"""
        return math.sqrt(self.kappa * self.N_S * (self.N_S + 1.0))

    @property
    def cycles(self) -> int:
        if self.K is not None:
            return self.K
        return max(1, math.ceil(-math.log(self.epsilon) / (2.0 * self.eta * self.N_B)))

    @property
    def residual_fraction(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return math.exp(-2.0 * self.eta * self.N_B * self.K)

    @property
    def depletion(self) -> float:
        """Per-cycle factor 1 - eta (1 + N_B) on the cross correlation"""
        return 1.0 - self.eta * (1.0 + self.N_B)

    @property
    def b_thermal_mean(self) -> float:
        """Thermal photons per sum-frequency mode, eta N_B N_S"""
        return self.eta * self.N_B * self.N_S

    @property
    def qcb_exponent(self) -> float:
        return self.M * self.kappa * self.N_S / self.N_B

    def regime_violations(self) -> list[str]:
        violations = []
        if self.N_S > REGIME_RATIO:
            violations.append(f"N_S={self.N_S:g} is not much less than 1")
        if self.N_B * REGIME_RATIO < 1.0:
            violations.append(f"N_B={self.N_B:g} is not much greater than 1")
        if self.eta * (1.0 + self.N_B) > REGIME_RATIO:
            violations.append(
                f"eta*(1+N_B)={self.eta * (1.0 + self.N_B):g} is not much less than 1"
            )
        coherent = self.M * self.C_p**2
        if self.N_B * self.N_S > REGIME_RATIO * coherent:
            violations.append(
                "thermal sum-frequency photons eta*N_B*N_S are not negligible "
                "against the coherent M*eta*C_p^2"
            )
        return violations
