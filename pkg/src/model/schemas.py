"""
Model Pydantic Schemas

Defines the experiment parameters and the couplings derived from them.
All quantities are SI; angular frequencies and rates are in rad/s.
"""

import math
from typing import Annotated

from pydantic import Field

from src.configs.constants import get_constants
from src.contrib.schemas import BaseSchema, KappaConvention


TWO_PI = 2.0 * math.pi


class PhysicalParams(BaseSchema):
    """
    Experiment Parameters

    Defaults reproduce the blue-detuned working point: a 1 mm cavity driven
    at 1064 nm with 5 mW, a 5 ng oscillator at 1 GHz and a 90 MHz cavity
    linewidth, starting at 1 mK.

    Attributes:
        cavity_length: Cavity length (m)
        wavelength: Drive wavelength (m); also fixes the cavity frequency
        mech_freq: Mechanical angular frequency (rad/s)
        mech_damping: Mechanical damping rate (rad/s)
        cavity_decay: Cavity decay rate (rad/s)
        input_power: Drive power (W)
        effective_mass: Mechanical effective mass (kg)
        temperature: Initial and bath temperature (K)
        detuning: Effective detuning (rad/s); negative is blue-detuned
        kappa_convention: Whether cavity_decay is an amplitude or energy rate
    """

    cavity_length: Annotated[float, Field(default=1e-3, gt=0, description='Cavity length (m)')]
    wavelength: Annotated[float, Field(default=1064e-9, gt=0, description='Drive wavelength (m)')]
    mech_freq: Annotated[
        float, Field(default=TWO_PI * 1e9, gt=0, description='Mechanical frequency (rad/s)')
    ]
    mech_damping: Annotated[
        float, Field(default=TWO_PI * 100.0, gt=0, description='Mechanical damping (rad/s)')
    ]
    cavity_decay: Annotated[
        float, Field(default=TWO_PI * 90e6, gt=0, description='Cavity decay rate (rad/s)')
    ]
    input_power: Annotated[float, Field(default=5e-3, ge=0, description='Drive power (W)')]
    effective_mass: Annotated[float, Field(default=5e-12, gt=0, description='Effective mass (kg)')]
    temperature: Annotated[float, Field(default=1e-3, ge=0, description='Temperature (K)')]
    detuning: Annotated[
        float,
        Field(default=-TWO_PI * 1e9, allow_inf_nan=False, description='Effective detuning (rad/s)'),
    ]
    kappa_convention: Annotated[
        KappaConvention,
        Field(default=KappaConvention.AMPLITUDE, description='Decay rate convention'),
    ]

    @property
    def cavity_freq(self) -> float:
        """Cavity (and drive) angular frequency 2πc/λ"""
        return TWO_PI * get_constants().speed_of_light / self.wavelength

    @property
    def field_decay(self) -> float:
        """Field amplitude decay rate entering the drift and diffusion matrices"""
        if self.kappa_convention is KappaConvention.ENERGY:
            return self.cavity_decay / 2.0
        return self.cavity_decay


class DerivedParams(BaseSchema):
    """
    Derived Couplings

    Attributes:
        g0: Single-photon optomechanical coupling G0 (rad/s)
        drive_amp: Drive amplitude E (1/s)
        cavity_amp: Mean intracavity amplitude α_s, real and nonnegative
        g_eff: Effective coupling G = √2·G0·α_s (rad/s)
        thermal_occ: Mechanical bath occupation n̄
        g_over_kappa: Weak-coupling ratio G/κ
        kappa_over_mech_freq: Sideband ratio κ/ω_m
        sideband_resolved: Whether κ < ω_m
    """

    g0: Annotated[float, Field(ge=0, description='Single-photon coupling (rad/s)')]
    drive_amp: Annotated[float, Field(ge=0, description='Drive amplitude (1/s)')]
    cavity_amp: Annotated[float, Field(ge=0, description='Mean cavity amplitude')]
    g_eff: Annotated[float, Field(ge=0, description='Effective coupling (rad/s)')]
    thermal_occ: Annotated[float, Field(ge=0, description='Thermal occupation')]
    g_over_kappa: Annotated[float, Field(ge=0, description='G/κ')]
    kappa_over_mech_freq: Annotated[float, Field(gt=0, description='κ/ω_m')]
    sideband_resolved: Annotated[bool, Field(description='κ < ω_m')]
