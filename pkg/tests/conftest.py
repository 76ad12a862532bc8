"""
Pytest Configuration and Fixtures

This module contains shared fixtures for all test modules.
"""

import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from scipy.special import genlaguerre

from src.dynamics.schemas import CovarianceState, DiffusionMatrix, DriftMatrix
from src.model.controller import derive_params
from src.model.schemas import DerivedParams, PhysicalParams


FOCK_CUTOFF = 40


@pytest.fixture
def blue_params() -> PhysicalParams:
    """Blue-detuned working point (all defaults)."""
    return PhysicalParams()


@pytest.fixture
def blue_derived(blue_params: PhysicalParams) -> DerivedParams:
    """Couplings derived from the blue-detuned working point."""
    return derive_params(blue_params)


@pytest.fixture
def unstable_params() -> PhysicalParams:
    """Blue-detuned drive strong enough to overwhelm the mechanical damping."""
    return PhysicalParams(input_power=0.5)


@pytest.fixture
def toy_drift() -> DriftMatrix:
    """
    Well-conditioned stable drift in units of the mechanical frequency
    (ω = 1, γ = 0.2, κ = 0.5, Δ = −1, G = 0.1).
    """
    return DriftMatrix(k=np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, -0.2, 0.1, 0.0],
        [0.0, 0.0, -0.5, -1.0],
        [0.1, 0.0, 1.0, -0.5],
    ]))


@pytest.fixture
def toy_diffusion() -> DiffusionMatrix:
    """Diffusion matching toy_drift with a bath occupation of 0.3."""
    return DiffusionMatrix(d=np.diag([0.0, 0.2 * 1.6, 0.5, 0.5]))


def tmsv_matrix(s: float) -> np.ndarray:
    """Two-mode squeezed vacuum covariance in the vacuum-1/2 convention."""
    ch, sh = math.cosh(2.0 * s), math.sinh(2.0 * s)
    z = np.diag([1.0, -1.0])
    return 0.5 * np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])


@pytest.fixture
def tmsv_covariance() -> Callable[[float], CovarianceState]:
    """Factory building TMSV covariance states from a squeezing parameter."""
    def build(s: float) -> CovarianceState:
        return CovarianceState(v=tmsv_matrix(s))
    return build


def fock_subtracted_tmsv(s: float, cutoff: int = FOCK_CUTOFF) -> np.ndarray:
    """
    Mechanical density matrix after subtracting one photon from a TMSV,
    built in a truncated Fock basis.

    The ket Σ tanhⁿs/cosh s |n⟩|n⟩ is acted on by the field annihilation
    operator and the field is traced out.
    """
    n = np.arange(cutoff + 1)
    amplitudes = np.tanh(s) ** n / np.cosh(s)
    ket = np.diag(amplitudes)
    annihilation = np.diag(np.sqrt(n[1:]), k=1)
    subtracted = ket @ annihilation.T
    rho = subtracted @ subtracted.conj().T
    return rho / np.trace(rho)


def fock_wigner(rho: np.ndarray, delta_r: np.ndarray, delta_i: np.ndarray) -> np.ndarray:
    """Wigner function of a Fock-diagonal density matrix."""
    radius2 = np.asarray(delta_r) ** 2 + np.asarray(delta_i) ** 2
    total = np.zeros_like(radius2, dtype=float)
    for n, weight in enumerate(np.real(np.diag(rho))):
        total += weight * (-1.0) ** n * genlaguerre(n, 0)(4.0 * radius2)
    return (2.0 / math.pi) * np.exp(-2.0 * radius2) * total


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str], Path]:
    """Write TOML text to a config file inside tmp_path and return its path."""
    def write(text: str, name: str = 'run.toml') -> Path:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return write
