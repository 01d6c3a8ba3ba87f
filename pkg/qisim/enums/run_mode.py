from enum import Enum


class RunMode(str, Enum):
    FIG2A = "fig2a"
    FIG2B = "fig2b"
    FIGS1 = "figS1"
    TRAJECTORY = "trajectory"
    BOUNDS = "bounds"


class MuTotalLaw(str, Enum):
    """Law used for the shared E-mode intensity of one trial"""

    GAUSSIAN = "gaussian"
    GAMMA = "gamma"
