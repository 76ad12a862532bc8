"""
Conditioning Pydantic Schemas

Blocks of the joint covariance, coefficients of the photon-subtracted
mechanical Wigner function and the observables derived from it.

Phase-space coordinates are δ = (δr, δi). The conditional Wigner function is

    W(δ) = A0 · (A1 + Brr δr² + Bri δr δi + Bii δi²) · exp(−δᵀ C δ)
"""

from typing import Annotated, NamedTuple

import numpy as np
from pydantic import Field, field_validator

from src.contrib.schemas import BaseSchema, FloatArray
from src.dynamics.schemas import CovarianceState


PROBABILITY_TOL = 1e-8
REMAINDER_TOL = 1e-6


def _check_square_2(value: np.ndarray) -> np.ndarray:
    if value.shape != (2, 2):
        raise ValueError(f'expected a 2x2 matrix, got shape {value.shape}')
    if not np.all(np.isfinite(value)):
        raise ValueError('matrix entries must be finite')
    return value


def _check_symmetric_2(value: np.ndarray) -> np.ndarray:
    _check_square_2(value)
    scale = max(float(np.max(np.abs(value))), 1.0)
    if abs(value[0, 1] - value[1, 0]) > 1e-12 * scale:
        raise ValueError('block must be symmetric')
    return value


class BlockDecomposition(BaseSchema):
    """
    Local blocks of the joint covariance in vacuum-1 units

    Attributes:
        m: Mechanical block (2·v[:2, :2])
        f: Field block (2·v[2:, 2:])
        c: Cross block (2·v[:2, 2:])
    """

    m: Annotated[FloatArray, Field(description='Mechanical block')]
    f: Annotated[FloatArray, Field(description='Field block')]
    c: Annotated[FloatArray, Field(description='Cross block')]

    @field_validator('m', 'f')
    @classmethod
    def _symmetric(cls, value: np.ndarray) -> np.ndarray:
        return _check_symmetric_2(value)

    @field_validator('c')
    @classmethod
    def _square(cls, value: np.ndarray) -> np.ndarray:
        return _check_square_2(value)

    def reassemble(self) -> np.ndarray:
        """Joint 4x4 matrix in vacuum-1 units, equal to 2·v"""
        return np.block([[self.m, self.c], [self.c.T, self.f]])


class WignerCoefficients(BaseSchema):
    """
    Conditional mechanical Wigner function after one photon subtraction

    Attributes:
        a0: Normalization prefactor A0
        a1: Constant polynomial term A1
        brr: Coefficient of δr²
        bri: Coefficient of δr·δi
        bii: Coefficient of δi²
        c_quad: Positive definite exponent matrix C
    """

    a0: float
    a1: float
    brr: float
    bri: float
    bii: float
    c_quad: Annotated[FloatArray, Field(description='Exponent quadratic form')]

    @field_validator('c_quad')
    @classmethod
    def _positive_definite(cls, value: np.ndarray) -> np.ndarray:
        _check_symmetric_2(value)
        if np.min(np.linalg.eigvalsh(value)) <= 0:
            raise ValueError('c_quad must be positive definite')
        return value

    @property
    def polynomial_matrix(self) -> np.ndarray:
        """Symmetric B with δᵀBδ = Brr δr² + Bri δr δi + Bii δi²"""
        return np.array([[self.brr, self.bri / 2.0], [self.bri / 2.0, self.bii]])

    def reflected(self) -> 'WignerCoefficients':
        """Coefficients of W(δi, δr), the reflection swapping the two axes"""
        return WignerCoefficients(
            a0=self.a0,
            a1=self.a1,
            brr=self.bii,
            bri=self.bri,
            bii=self.brr,
            c_quad=self.c_quad[::-1, ::-1],
        )


class PhononDistribution(BaseSchema):
    """
    Conditional phonon-number statistics

    Attributes:
        probs: P(n) for n = 0..n_max
        remainder: 1 − Σ P(n), the weight above n_max
    """

    probs: Annotated[FloatArray, Field(description='P(0..n_max)')]
    remainder: float

    @field_validator('probs')
    @classmethod
    def _probabilities(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 1 or value.size == 0:
            raise ValueError('probs must be a nonempty vector')
        if np.any(value < -PROBABILITY_TOL) or np.any(value > 1 + PROBABILITY_TOL):
            raise ValueError('probabilities must lie in [0, 1]')
        return value

    @field_validator('remainder')
    @classmethod
    def _remainder(cls, value: float) -> float:
        if value < -REMAINDER_TOL:
            raise ValueError(f'negative truncation remainder {value!r}')
        return value

    @property
    def n_max(self) -> int:
        return self.probs.size - 1


class ConditionalObservables(BaseSchema):
    """Observables of one subtraction event at a given interaction time"""

    covariance: CovarianceState
    coefficients: WignerCoefficients
    fidelity: float
    n_eff: float
    log_negativity: float

    @property
    def time(self) -> float:
        return self.covariance.time


class SubtractionOptimum(NamedTuple):
    """Best subtraction time on a grid"""

    time: float
    fidelity: float
