from dataclasses import dataclass, replace
from .moments import ModePairMoments


@dataclass(frozen=True, slots=True)
class SfgQubitState:
    """Moment set of M signal-idler pairs coupled to one sum-frequency mode

    Per-pair quantities (C, n_si, F, G, n_s, n_i) are the same for every pair
    under permutation-invariant initial conditions.
    """

    C: complex
    b: complex
    n_b: float
    n_si: float
    F: complex
    G: complex
    n_s: float
    n_i: float

    @classmethod
    def from_pair_moments(cls, moments: ModePairMoments) -> "SfgQubitState":
        """Initial state: Gaussian pairs, sum-frequency mode in vacuum"""
        C = complex(moments.C_si)
        return cls(
            C=C,
            b=0j,
            n_b=0.0,
            n_si=moments.n_s * moments.n_i + abs(C) ** 2,
            F=0j,
            G=complex(abs(C) ** 2),
            n_s=moments.n_s,
            n_i=moments.n_i,
        )

    def with_updates(self, **changes) -> "SfgQubitState":
        return replace(self, **changes)
