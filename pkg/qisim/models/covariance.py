from dataclasses import dataclass
import numpy as np

VACUUM_VARIANCE = 0.25

# Symplectic form for quadrature ordering (x_S, p_S, x_I, p_I)
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class WignerCovariance:
    """4x4 Wigner covariance of a signal-idler pair, vacuum variance 1/4"""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        if matrix.shape != (4, 4):
            raise ValueError(f"Expected a 4x4 covariance, got shape {matrix.shape}")
        if not np.allclose(matrix, matrix.T, atol=1e-14):
            raise ValueError("Covariance matrix must be symmetric")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def symplectic_eigenvalues(self) -> np.ndarray:
        """The two symplectic eigenvalues, ascending"""
        spectrum = np.abs(np.linalg.eigvals(1j * OMEGA @ self.matrix))
        return np.sort(spectrum)[::2]

    def is_physical(self, tol: float = 1e-12) -> bool:
        return bool(self.symplectic_eigenvalues().min() >= VACUUM_VARIANCE - tol)
