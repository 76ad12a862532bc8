"""
Conditioning Controller

Applies single-photon subtraction to the cavity field of a two-mode Gaussian
state and evaluates the conditional mechanical state: Wigner function, Fock
fidelities, phonon statistics, effective occupation and the entanglement of
the state before subtraction.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from scipy.special import eval_laguerre

from src.configs.settings import settings
from src.contrib.exceptions import (
    DegenerateMechanicalBlockError,
    InstabilityError,
    NumericalSelfCheckError,
    ParameterValidationError,
    QuadratureDisagreementError,
    VacuumFieldError,
)
from src.dynamics.controller import (
    diffusion_matrix,
    drift_matrix,
    evolve,
    initial_covariance,
    is_stable,
    propagate,
)
from src.dynamics.schemas import CovarianceState
from src.model.controller import derive_params
from src.model.schemas import PhysicalParams
from .quadrature import grid_integral, laguerre_gaussian_integral, phase_space_grid
from .schemas import (
    PROBABILITY_TOL,
    REMAINDER_TOL,
    BlockDecomposition,
    ConditionalObservables,
    PhononDistribution,
    SubtractionOptimum,
    WignerCoefficients,
)


logger = logging.getLogger(__name__)

VACUUM_FIELD_TOL = 1e-12
FIDELITY_TOL = 1e-9
N_EFF_TOL = 1e-9


def block_decompose(v: CovarianceState) -> BlockDecomposition:
    """Split a covariance into mechanical, field and cross blocks in vacuum-1 units"""
    doubled = 2.0 * v.v
    return BlockDecomposition(m=doubled[:2, :2], f=doubled[2:, 2:], c=doubled[:2, 2:])


def wigner_coefficients(b: BlockDecomposition) -> WignerCoefficients:
    """
    Coefficients of the mechanical Wigner function after one photon is
    subtracted from the field

    Args:
        b: Covariance blocks in vacuum-1 units

    Returns:
        WignerCoefficients: A0, A1, Brr, Bri, Bii and C

    Raises:
        VacuumFieldError: If f11 + f22 − 2 vanishes
        DegenerateMechanicalBlockError: If 4·m11·m22 − (m12 + m21)² ≤ 0 or m11 ≤ 0
    """
    (m11, m12), (m21, m22) = b.m
    (c11, c12), (c21, c22) = b.c
    f_sub = b.f[0, 0] + b.f[1, 1] - 2.0

    if f_sub <= VACUUM_FIELD_TOL:
        raise VacuumFieldError(
            f'field block is vacuum (f11 + f22 - 2 = {f_sub:.3g}); subtraction has zero probability'
        )
    m_sum = m12 + m21
    den = 4.0 * m11 * m22 - m_sum**2
    if den <= 0 or m11 <= 0:
        raise DegenerateMechanicalBlockError(
            f'mechanical block is degenerate '
            f'(4 m11 m22 - (m12 + m21)^2 = {den:.3g}, m11 = {m11:.3g})'
        )

    lower = c21**2 + c22**2
    upper = c11**2 + c12**2
    mixed = c11 * c21 + c12 * c22

    norm = 4.0 / f_sub
    a0 = norm / math.pi * m11**-2.5 * math.sqrt(m11 / den)
    poly = (
        -4.0 * lower * m11
        + 4.0 * mixed * m_sum
        - 4.0 * upper * m22
        - f_sub * (m_sum**2 - 4.0 * m11 * m22)
    )
    a1 = m11**2 / den * poly

    prefactor = m11**2 / den**2
    brr = 16.0 * prefactor * (4.0 * lower * m11**2 - 4.0 * mixed * m_sum * m11 + upper * m_sum**2)
    bri = 32.0 * prefactor * (
        2.0 * m_sum * (lower * m11 + upper * m22) - mixed * (m_sum**2 + 4.0 * m11 * m22)
    )
    bii = 16.0 * prefactor * (lower * m_sum**2 - 4.0 * mixed * m_sum * m22 + 4.0 * upper * m22**2)

    c_quad = (8.0 / den) * np.array([[m11, m_sum / 2.0], [m_sum / 2.0, m22]])
    return WignerCoefficients(a0=a0, a1=a1, brr=brr, bri=bri, bii=bii, c_quad=c_quad)


def subtract_photon(v: CovarianceState) -> WignerCoefficients:
    """Conditional mechanical Wigner coefficients of a joint covariance"""
    return wigner_coefficients(block_decompose(v))


def wigner_eval(w: WignerCoefficients, delta_r, delta_i):
    """
    Evaluate the conditional Wigner function

    Accepts scalars or broadcastable arrays; scalars give a float.
    """
    delta_r = np.asarray(delta_r, dtype=float)
    delta_i = np.asarray(delta_i, dtype=float)
    poly = w.a1 + w.brr * delta_r**2 + w.bri * delta_r * delta_i + w.bii * delta_i**2
    exponent = (
        w.c_quad[0, 0] * delta_r**2
        + 2.0 * w.c_quad[0, 1] * delta_r * delta_i
        + w.c_quad[1, 1] * delta_i**2
    )
    values = w.a0 * poly * np.exp(-exponent)
    return float(values) if values.ndim == 0 else values


def target_fock_wigner(n: int, delta_r, delta_i):
    """
    Wigner function of the Fock state |n⟩

    W_n(δ) = (2/π)(−1)ⁿ L_n(4|δ|²) e^{−2|δ|²}

    n = 1 uses the explicit form (2/π)(4|δ|² − 1) e^{−2|δ|²}.

    Raises:
        ParameterValidationError: If n is negative
    """
    if n < 0:
        raise ParameterValidationError(f'Fock index must be nonnegative, got {n!r}')
    radius2 = np.asarray(delta_r, dtype=float) ** 2 + np.asarray(delta_i, dtype=float) ** 2
    envelope = (2.0 / math.pi) * np.exp(-2.0 * radius2)
    if n == 1:
        values = envelope * (4.0 * radius2 - 1.0)
    else:
        values = envelope * (-1.0) ** n * eval_laguerre(n, 4.0 * radius2)
    return float(values) if np.ndim(values) == 0 else values


def _cross_checked(closed_form: float, quadrature: float, label: str) -> float:
    gap = abs(closed_form - quadrature)
    logger.debug('%s: closed form %.12g, quadrature gap %.3g', label, closed_form, gap)
    if gap > settings.QUADRATURE_AGREEMENT_TOL:
        raise QuadratureDisagreementError(closed_form, quadrature)
    return closed_form


def _grid_values(w: WignerCoefficients) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    delta_r, delta_i = phase_space_grid(settings.QUADRATURE_STEP, settings.QUADRATURE_HALF_WIDTH)
    return delta_r, delta_i, wigner_eval(w, delta_r, delta_i)


def _fock_overlap(w: WignerCoefficients, n: int, grid: tuple) -> float:
    delta_r, delta_i, values = grid
    closed = (
        2.0 * w.a0 * (-1.0) ** n
        * laguerre_gaussian_integral(w.a1, w.polynomial_matrix, w.c_quad + 2.0 * np.eye(2), n)
    )
    quad = math.pi * grid_integral(
        values * target_fock_wigner(n, delta_r, delta_i), settings.QUADRATURE_STEP
    )
    return _cross_checked(closed, quad, f'overlap with |{n}>')


def fock_overlap(w: WignerCoefficients, n: int) -> float:
    """
    Unclamped overlap ⟨n|ρ|n⟩ = π∫W·W_n d²δ

    Raises:
        QuadratureDisagreementError: If the closed form and the grid sum disagree
    """
    if n < 0:
        raise ParameterValidationError(f'Fock index must be nonnegative, got {n!r}')
    return _fock_overlap(w, n, _grid_values(w))


def wigner_normalization(w: WignerCoefficients) -> float:
    """∫W d²δ, cross-checked against the quadrature grid"""
    _, _, values = _grid_values(w)
    closed = w.a0 * laguerre_gaussian_integral(w.a1, w.polynomial_matrix, w.c_quad, 0)
    return _cross_checked(closed, grid_integral(values, settings.QUADRATURE_STEP), 'normalization')


def _clamp_unit(value: float, tol: float, label: str) -> float:
    if value < -tol or value > 1.0 + tol:
        raise NumericalSelfCheckError(f'{label} {value!r} lies outside [0, 1]')
    if value != min(max(value, 0.0), 1.0):
        logger.debug('clamping %s %.3g to the unit interval', label, value)
    return min(max(value, 0.0), 1.0)


def fidelity(w: WignerCoefficients, n: int = 1) -> float:
    """
    Fidelity of the conditional state with the Fock state |n⟩

    Args:
        w: Conditional Wigner coefficients
        n: Target Fock index

    Returns:
        float: π∫W·W_n d²δ clamped to [0, 1]

    Raises:
        QuadratureDisagreementError: If the two overlap evaluations disagree
        NumericalSelfCheckError: If the overlap leaves [0, 1] by more than rounding
    """
    return _clamp_unit(fock_overlap(w, n), FIDELITY_TOL, 'fidelity')


def phonon_distribution(w: WignerCoefficients, n_max: int | None = None) -> PhononDistribution:
    """
    Phonon-number probabilities P(0..n_max) of the conditional state

    The weight above n_max is reported as the remainder, not renormalized.

    Raises:
        QuadratureDisagreementError: If an overlap evaluation disagrees
    """
    n_max = settings.DEFAULT_N_MAX if n_max is None else n_max
    if n_max < 0:
        raise ParameterValidationError(f'n_max must be nonnegative, got {n_max!r}')

    grid = _grid_values(w)
    probs = np.array(
        [
            _clamp_unit(_fock_overlap(w, n, grid), PROBABILITY_TOL, f'P({n})')
            for n in range(n_max + 1)
        ]
    )
    remainder = 1.0 - float(np.sum(probs))
    if remainder < -REMAINDER_TOL:
        raise NumericalSelfCheckError(
            f'phonon probabilities sum above one (remainder {remainder:.3g})'
        )
    return PhononDistribution(probs=probs, remainder=remainder)


def tmsv_subtracted_distribution(s: float, n: int) -> float:
    """
    P(n) after subtracting one photon from a two-mode squeezed vacuum

    P(n, s) = n·tanh^{2n}(s) / (cosh s · sinh s)²

    Raises:
        ParameterValidationError: If s ≤ 0 or n < 0
    """
    if not (math.isfinite(s) and s > 0):
        raise ParameterValidationError(f'squeezing must be positive, got {s!r}')
    if n < 0:
        raise ParameterValidationError(f'Fock index must be nonnegative, got {n!r}')
    return n * math.tanh(s) ** (2 * n) / (math.cosh(s) * math.sinh(s)) ** 2


def effective_phonon_number(v: CovarianceState) -> float:
    """Mechanical occupation (v11 + v22 − 1)/2 of a vacuum-1/2 covariance"""
    n_eff = (v.v[0, 0] + v.v[1, 1] - 1.0) / 2.0
    if n_eff < -N_EFF_TOL:
        raise NumericalSelfCheckError(f'negative effective phonon number {n_eff!r}')
    return max(float(n_eff), 0.0)


def logarithmic_negativity(v: CovarianceState) -> float:
    """
    Logarithmic negativity E_N = max(0, −ln 2ν̃₋)

    ν̃₋ is the smaller symplectic eigenvalue of the partial transpose,
    obtained from the local invariants det A, det B and det C.
    """
    det_a = np.linalg.det(v.mechanical_block)
    det_b = np.linalg.det(v.field_block)
    det_c = np.linalg.det(v.cross_block)
    det_v = np.linalg.det(v.v)

    invariant = det_a + det_b - 2.0 * det_c
    discriminant = max(invariant**2 - 4.0 * det_v, 0.0)
    nu_plus2 = (invariant + math.sqrt(discriminant)) / 2.0
    nu_minus2 = det_v / nu_plus2
    if nu_minus2 <= 0:
        raise NumericalSelfCheckError(f'nonpositive partially transposed spectrum {nu_minus2!r}')
    return max(0.0, -0.5 * math.log(4.0 * nu_minus2))


def conditional_observables(p: PhysicalParams, t: float) -> ConditionalObservables:
    """
    Evolve an experiment for a time t and subtract one photon

    Args:
        p: Physical parameters
        t: Interaction time (s); math.inf subtracts at the steady state

    Returns:
        ConditionalObservables: Joint state, coefficients and observables
    """
    v = evolve(p, t)
    w = subtract_photon(v)
    return ConditionalObservables(
        covariance=v,
        coefficients=w,
        fidelity=fidelity(w),
        n_eff=effective_phonon_number(v),
        log_negativity=logarithmic_negativity(v),
    )


def find_optimal_subtraction_time(
    p: PhysicalParams,
    t_grid: Sequence[float],
    threads: int = 1,
) -> SubtractionOptimum:
    """
    Grid point maximizing the single-phonon fidelity

    Points where the field is still vacuum (t = 0) are skipped. Ties go to
    the earliest time.

    Args:
        p: Physical parameters
        t_grid: Nonnegative subtraction times (s)
        threads: Worker threads used to evaluate grid points

    Returns:
        SubtractionOptimum: (time, fidelity)

    Raises:
        ParameterValidationError: If the grid is empty or holds a negative time
        InstabilityError: If the parameters give unstable dynamics
        VacuumFieldError: If no grid point admits a subtraction
    """
    times = [float(t) for t in t_grid]
    if not times:
        raise ParameterValidationError('time grid must not be empty')
    if any(not (math.isfinite(t) and t >= 0) for t in times):
        raise ParameterValidationError('time grid must hold finite nonnegative times')

    derived = derive_params(p)
    k = drift_matrix(derived, p)
    d = diffusion_matrix(p, derived.thermal_occ)
    report = is_stable(k)
    if not report.stable:
        raise InstabilityError(report.spectral_abscissa)
    v0 = initial_covariance(derived.thermal_occ)

    def score(t: float) -> float | None:
        try:
            return fidelity(subtract_photon(propagate(v0, k, d, t)))
        except VacuumFieldError:
            logger.warning('skipping t=%.6g s: field is still vacuum', t)
            return None

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        scores = list(executor.map(score, times))

    best: SubtractionOptimum | None = None
    for t, f in zip(times, scores):
        if f is not None and (best is None or f > best.fidelity):
            best = SubtractionOptimum(time=t, fidelity=f)
    if best is None:
        raise VacuumFieldError('no grid point admits a photon subtraction')

    logger.info('optimal subtraction at t=%.6g s with fidelity %.8f', best.time, best.fidelity)
    return best
