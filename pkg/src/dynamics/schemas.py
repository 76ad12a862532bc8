"""
Dynamics Pydantic Schemas

Matrices of the linearized two-mode dynamics over the quadrature ordering
(δq, δp, δX, δY), and the Gaussian state they evolve.
"""

from typing import Annotated

import numpy as np
from pydantic import Field, field_validator

from src.contrib.schemas import BaseSchema, FloatArray


SYMPLECTIC_FORM = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_square_4(value: np.ndarray) -> np.ndarray:
    if value.shape != (4, 4):
        raise ValueError(f'expected a 4x4 matrix, got shape {value.shape}')
    if not np.all(np.isfinite(value)):
        raise ValueError('matrix entries must be finite')
    return value


class DriftMatrix(BaseSchema):
    """Generator k of the mean-fluctuation dynamics (rad/s)"""

    k: Annotated[FloatArray, Field(description='4x4 drift matrix')]

    @field_validator('k')
    @classmethod
    def _square(cls, value: np.ndarray) -> np.ndarray:
        return _check_square_4(value)


class DiffusionMatrix(BaseSchema):
    """Diagonal noise input D of the covariance evolution (rad/s)"""

    d: Annotated[FloatArray, Field(description='4x4 diagonal diffusion matrix')]

    @field_validator('d')
    @classmethod
    def _diagonal_nonnegative(cls, value: np.ndarray) -> np.ndarray:
        _check_square_4(value)
        if np.any(value - np.diag(np.diag(value))):
            raise ValueError('diffusion matrix must be diagonal')
        if np.any(np.diag(value) < 0):
            raise ValueError('diffusion entries must be nonnegative')
        return value


class CovarianceState(BaseSchema):
    """
    Two-mode Gaussian state

    The covariance uses the vacuum-1/2 convention: every vacuum quadrature
    variance equals 1/2.

    Attributes:
        v: Symmetric 4x4 covariance matrix
        time: Elapsed time in seconds; infinite for the steady state
    """

    v: Annotated[FloatArray, Field(description='4x4 covariance matrix')]
    time: Annotated[float, Field(default=0.0, ge=0, description='Time stamp (s)')]

    @field_validator('v')
    @classmethod
    def _symmetric(cls, value: np.ndarray) -> np.ndarray:
        _check_square_4(value)
        scale = max(float(np.max(np.abs(value))), 1.0)
        if np.max(np.abs(value - value.T)) > 1e-12 * scale:
            raise ValueError('covariance matrix must be symmetric')
        return value

    @property
    def mechanical_block(self) -> np.ndarray:
        return self.v[:2, :2]

    @property
    def field_block(self) -> np.ndarray:
        return self.v[2:, 2:]

    @property
    def cross_block(self) -> np.ndarray:
        return self.v[:2, 2:]

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Ascending symplectic eigenvalues (moduli of the eigenvalues of iΩv)"""
        moduli = np.sort(np.abs(np.linalg.eigvals(1j * SYMPLECTIC_FORM @ self.v)))
        return moduli[::2]

    def is_bona_fide(self, tol: float = 1e-9) -> bool:
        """Whether v + (i/2)Ω ≥ 0, checked on the symplectic spectrum"""
        if np.min(np.linalg.eigvalsh(self.v)) < -tol:
            return False
        return bool(np.all(self.symplectic_eigenvalues() >= 0.5 - tol))


class StabilityReport(BaseSchema):
    """Outcome of the eigenvalue stability criterion"""

    stable: bool
    spectral_abscissa: float

    def __bool__(self) -> bool:
        return self.stable
