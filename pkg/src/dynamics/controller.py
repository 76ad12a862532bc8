"""
Dynamics Controller

Builds the linearized drift and diffusion matrices, checks stability and
evolves the covariance matrix

    dv/dt = k v + v kᵀ + D

either to a finite time or to its stationary (Lyapunov) solution.
"""

import logging
import math

import numpy as np
from scipy import linalg

from src.configs.settings import settings
from src.contrib.exceptions import (
    InstabilityError,
    NumericalSelfCheckError,
    ParameterValidationError,
)
from src.model.controller import derive_params
from src.model.schemas import DerivedParams, PhysicalParams
from .schemas import CovarianceState, DiffusionMatrix, DriftMatrix, StabilityReport


logger = logging.getLogger(__name__)

# Largest ‖k·h‖₁ evaluated by a single block exponential.
_MAX_STEP_NORM = 0.5


def drift_matrix(d: DerivedParams, p: PhysicalParams) -> DriftMatrix:
    """
    Linearized quantum Langevin drift

    Args:
        d: Derived couplings (uses G)
        p: Physical parameters (uses ω_m, γ_m, κ, Δ)

    Returns:
        DriftMatrix: k over the ordering (δq, δp, δX, δY)
    """
    kappa = p.field_decay
    k = np.array(
        [
            [0.0, p.mech_freq, 0.0, 0.0],
            [-p.mech_freq, -p.mech_damping, d.g_eff, 0.0],
            [0.0, 0.0, -kappa, p.detuning],
            [d.g_eff, 0.0, -p.detuning, -kappa],
        ]
    )
    return DriftMatrix(k=k)


def diffusion_matrix(p: PhysicalParams, nbar: float) -> DiffusionMatrix:
    """
    Diffusion matrix diag(0, γ_m(2n̄+1), κ, κ)

    Raises:
        ParameterValidationError: If nbar is negative
    """
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ParameterValidationError(f'nbar must be nonnegative, got {nbar!r}')
    kappa = p.field_decay
    return DiffusionMatrix(d=np.diag([0.0, p.mech_damping * (2.0 * nbar + 1.0), kappa, kappa]))


def is_stable(k: DriftMatrix) -> StabilityReport:
    """Eigenvalue stability criterion: max Re λ(k) < 0"""
    abscissa = float(np.max(np.linalg.eigvals(k.k).real))
    return StabilityReport(stable=abscissa < 0, spectral_abscissa=abscissa)


def initial_covariance(nbar: float) -> CovarianceState:
    """
    Thermal mechanics at occupation n̄ with the field in vacuum

    Raises:
        ParameterValidationError: If nbar is negative
    """
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ParameterValidationError(f'nbar must be nonnegative, got {nbar!r}')
    return CovarianceState(v=np.diag([nbar + 0.5, nbar + 0.5, 0.5, 0.5]), time=0.0)


def _rate_scale(k: np.ndarray) -> float:
    scale = float(np.max(np.abs(k)))
    return scale if scale > 0 else 1.0


def _flow(a: np.ndarray, diffusion: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Return M = e^{aτ} and Q = ∫₀^τ e^{as} D e^{aᵀs} ds

    Evaluates the block exponential of [[-a, D], [0, aᵀ]] on a step h = τ/2^n
    with ‖a‖₁h ≤ 1/2 and doubles n times using
    M(2h) = M(h)², Q(2h) = M(h) Q(h) M(h)ᵀ + Q(h).
    """
    norm = np.linalg.norm(a, 1) * tau
    doublings = max(0, math.ceil(math.log2(norm / _MAX_STEP_NORM))) if norm > _MAX_STEP_NORM else 0
    h = tau / 2**doublings

    n = a.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -a
    block[:n, n:] = diffusion
    block[n:, n:] = a.T
    exp_block = linalg.expm(block * h)

    m = exp_block[n:, n:].T
    q = m @ exp_block[:n, n:]
    for _ in range(doublings):
        q = m @ q @ m.T + q
        m = m @ m
        q = 0.5 * (q + q.T)

    logger.debug('flow over tau=%.6g used %d doublings', tau, doublings)
    return m, q


def propagate(
    v0: CovarianceState,
    k: DriftMatrix,
    d: DiffusionMatrix,
    t: float,
) -> CovarianceState:
    """
    Evolve a covariance matrix for a time t

    Uses the closed form v(t) = M v0 Mᵀ + Q(t) with M = e^{kt}. Rates are
    divided by max|k| before exponentiation so the block exponential acts
    on entries of order one.

    Args:
        v0: Initial state
        k: Drift matrix
        d: Diffusion matrix
        t: Elapsed time (s), nonnegative

    Returns:
        CovarianceState: v(t), stamped with v0.time + t

    Raises:
        ParameterValidationError: If t is negative or not finite
    """
    if not (math.isfinite(t) and t >= 0):
        raise ParameterValidationError(f'propagation time must be nonnegative, got {t!r}')
    if t == 0:
        return CovarianceState(v=v0.v, time=v0.time)

    scale = _rate_scale(k.k)
    m, q = _flow(k.k / scale, d.d / scale, t * scale)
    v = m @ v0.v @ m.T + q
    return CovarianceState(v=0.5 * (v + v.T), time=v0.time + t)


def steady_state(
    k: DriftMatrix,
    d: DiffusionMatrix,
    residual_tol: float | None = None,
) -> CovarianceState:
    """
    Stationary covariance solving k v + v kᵀ + D = 0

    Args:
        k: Drift matrix, must be stable
        d: Diffusion matrix
        residual_tol: Relative residual bound; defaults to settings.LYAPUNOV_RESIDUAL_TOL

    Returns:
        CovarianceState: Steady state with time = inf

    Raises:
        InstabilityError: If k has an eigenvalue with nonnegative real part
        NumericalSelfCheckError: If the solve misses the residual bound
    """
    report = is_stable(k)
    if not report.stable:
        raise InstabilityError(report.spectral_abscissa)

    residual_tol = settings.LYAPUNOV_RESIDUAL_TOL if residual_tol is None else residual_tol
    scale = _rate_scale(k.k)
    a = k.k / scale
    diffusion = d.d / scale
    v = linalg.solve_continuous_lyapunov(a, -diffusion)
    v = 0.5 * (v + v.T)

    residual = np.linalg.norm(a @ v + v @ a.T + diffusion)
    reference = np.linalg.norm(diffusion)
    relative = residual / reference if reference > 0 else residual
    logger.debug('lyapunov relative residual %.3g', relative)
    if relative > residual_tol:
        raise NumericalSelfCheckError(
            f'Lyapunov residual {relative:.3g} exceeds tolerance {residual_tol:.3g}'
        )
    return CovarianceState(v=v, time=math.inf)


def evolve(p: PhysicalParams, t: float) -> CovarianceState:
    """
    Joint state of an experiment after an interaction time t

    Starts from thermal mechanics and cavity vacuum; t = inf returns the
    steady state.

    Raises:
        InstabilityError: If the parameters give unstable dynamics
    """
    derived = derive_params(p)
    k = drift_matrix(derived, p)
    d = diffusion_matrix(p, derived.thermal_occ)
    if math.isinf(t):
        return steady_state(k, d)

    report = is_stable(k)
    if not report.stable:
        raise InstabilityError(report.spectral_abscissa)
    return propagate(initial_covariance(derived.thermal_occ), k, d, t)
