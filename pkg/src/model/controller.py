"""
Model Controller

Converts physical experiment parameters into derived couplings.
"""

import logging
import math

import numpy as np

from src.configs.constants import PhysicalConstants, get_constants
from src.contrib.exceptions import ParameterValidationError
from .schemas import DerivedParams, PhysicalParams


logger = logging.getLogger(__name__)


def thermal_occupation(
    mech_freq: float,
    temperature: float,
    constants: PhysicalConstants | None = None,
) -> float:
    """
    Bose-Einstein occupation of a mode

    Args:
        mech_freq: Angular frequency (rad/s), strictly positive
        temperature: Bath temperature (K), nonnegative

    Returns:
        float: n̄ = 1/(exp(ħω/k_B T) − 1), exactly 0 at T = 0

    Raises:
        ParameterValidationError: If the frequency or temperature is out of range
    """
    if not (math.isfinite(mech_freq) and mech_freq > 0):
        raise ParameterValidationError(f'mech_freq must be positive, got {mech_freq!r}')
    if not (math.isfinite(temperature) and temperature >= 0):
        raise ParameterValidationError(f'temperature must be nonnegative, got {temperature!r}')
    if temperature == 0:
        return 0.0

    constants = constants or get_constants()
    x = constants.hbar * mech_freq / (constants.k_boltzmann * temperature)
    return float(np.exp(-x) / -np.expm1(-x))


def derive_params(p: PhysicalParams) -> DerivedParams:
    """
    Derive the linearized couplings of an experiment

    Args:
        p: Physical parameters

    Returns:
        DerivedParams: G0, E, α_s, G, n̄ and the regime ratios

    Raises:
        ParameterValidationError: If a mass, length or frequency is not positive
    """
    for name in ('cavity_length', 'wavelength', 'mech_freq', 'cavity_decay', 'effective_mass'):
        value = getattr(p, name)
        if not value > 0:
            raise ParameterValidationError(f'{name} must be positive, got {value!r}')

    constants = get_constants()
    cavity_freq = p.cavity_freq

    g0 = (cavity_freq / p.cavity_length) * math.sqrt(
        constants.hbar / (p.effective_mass * p.mech_freq)
    )
    drive_amp = math.sqrt(2.0 * p.input_power * p.cavity_decay / (constants.hbar * cavity_freq))
    cavity_amp = drive_amp / math.hypot(p.cavity_decay, p.detuning)
    g_eff = math.sqrt(2) * g0 * cavity_amp

    derived = DerivedParams(
        g0=g0,
        drive_amp=drive_amp,
        cavity_amp=cavity_amp,
        g_eff=g_eff,
        thermal_occ=thermal_occupation(p.mech_freq, p.temperature, constants),
        g_over_kappa=g_eff / p.cavity_decay,
        kappa_over_mech_freq=p.cavity_decay / p.mech_freq,
        sideband_resolved=p.cavity_decay < p.mech_freq,
    )
    logger.debug(
        'derived G0=%.6g alpha_s=%.6g G=%.6g nbar=%.6g',
        g0, cavity_amp, g_eff, derived.thermal_occ,
    )
    return derived
