from dataclasses import dataclass
from qisim.exceptions import UnphysicalStateError


@dataclass(frozen=True, slots=True)
class ModePairMoments:
    """Per-pair second moments of a returned-signal/retained-idler mode pair

    n_s and n_i are mean photon numbers, C_si = <a_S a_I> is real.
    """

    n_s: float
    n_i: float
    C_si: float

    def is_physical(self, tol: float = 1e-12) -> bool:
        if self.n_s < -tol or self.n_i < -tol:
            return False
        low, high = sorted((max(self.n_s, 0.0), max(self.n_i, 0.0)))
        return self.C_si**2 <= low * (1.0 + high) + tol

    def validate(self) -> "ModePairMoments":
        if not self.is_physical():
            raise UnphysicalStateError(
                f"Moments n_s={self.n_s:g}, n_i={self.n_i:g}, C_si={self.C_si:g} "
                "violate the uncertainty principle"
            )
        return self
