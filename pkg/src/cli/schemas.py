"""
CLI Pydantic Schemas

Defines the run configuration read from TOML files and the rows written to
CSV. Angular frequencies are configured as `*_over_2pi` values in Hz.
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Annotated, Any, NamedTuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from src.configs.settings import settings
from src.contrib.schemas import BaseSchema, ExperimentKind, KappaConvention
from src.model.schemas import TWO_PI, PhysicalParams


# Red-detuned steady-state working point. Only the lighter mass and the
# detuning Δ = +ω_m are pinned; every other value is reconstructed from the
# blue-detuned defaults and may be overridden in [params].
STEADY_RED_PRESET: dict[str, float] = {
    'effective_mass': 5e-15,
    'detuning_over_mech_freq': 1.0,
}


class ExperimentSection(BaseSchema):
    """[experiment] table"""

    kind: Annotated[
        ExperimentKind,
        Field(default=ExperimentKind.TIME_SWEEP, description='Experiment to run'),
    ]
    subtraction_time: Annotated[
        float,
        Field(default=9e-6, gt=0, allow_inf_nan=False, description='Subtraction time (s)'),
    ]
    threads: Annotated[
        int,
        Field(default_factory=lambda: settings.DEFAULT_THREADS, ge=1, description='Worker threads'),
    ]


class ParamsSection(BaseSchema):
    """
    [params] table

    Defaults reproduce the blue-detuned working point. Fields left unset take
    the steady_red preset when that experiment is selected.
    """

    cavity_length: Annotated[float, Field(default=1e-3, gt=0, description='Cavity length (m)')]
    wavelength: Annotated[float, Field(default=1064e-9, gt=0, description='Drive wavelength (m)')]
    mech_freq_over_2pi: Annotated[
        float, Field(default=1e9, gt=0, description='Mechanical frequency (Hz)')
    ]
    mech_damping_over_2pi: Annotated[
        float, Field(default=100.0, gt=0, description='Mechanical damping (Hz)')
    ]
    cavity_decay_over_2pi: Annotated[
        float, Field(default=90e6, gt=0, description='Cavity decay rate (Hz)')
    ]
    input_power: Annotated[float, Field(default=5e-3, ge=0, description='Drive power (W)')]
    effective_mass: Annotated[float, Field(default=5e-12, gt=0, description='Effective mass (kg)')]
    temperature: Annotated[float, Field(default=1e-3, ge=0, description='Temperature (K)')]
    detuning_over_mech_freq: Annotated[
        float, Field(default=-1.0, allow_inf_nan=False, description='Detuning in units of ω_m')
    ]
    kappa_convention: Annotated[
        KappaConvention,
        Field(default=KappaConvention.AMPLITUDE, description='Decay rate convention'),
    ]

    def resolve(self, kind: ExperimentKind) -> PhysicalParams:
        """Physical parameters in SI units for the given experiment"""
        values = self.model_dump()
        if kind is ExperimentKind.STEADY_RED:
            for name, preset in STEADY_RED_PRESET.items():
                if name not in self.model_fields_set:
                    values[name] = preset

        mech_freq = TWO_PI * values['mech_freq_over_2pi']
        return PhysicalParams(
            cavity_length=values['cavity_length'],
            wavelength=values['wavelength'],
            mech_freq=mech_freq,
            mech_damping=TWO_PI * values['mech_damping_over_2pi'],
            cavity_decay=TWO_PI * values['cavity_decay_over_2pi'],
            input_power=values['input_power'],
            effective_mass=values['effective_mass'],
            temperature=values['temperature'],
            detuning=values['detuning_over_mech_freq'] * mech_freq,
            kappa_convention=values['kappa_convention'],
        )


class GridsSection(BaseSchema):
    """[grids] table"""

    time_start: Annotated[float, Field(default=0.5e-6, gt=0, description='First time (s)')]
    time_stop: Annotated[float, Field(default=50e-6, gt=0, description='Last time (s)')]
    time_step: Annotated[float, Field(default=0.5e-6, gt=0, description='Time step (s)')]
    temperatures: Annotated[
        list[float],
        Field(
            default_factory=lambda: [5e-3, 10e-3, 15e-3, 20e-3, 25e-3, 50e-3],
            min_length=1,
            description='Temperatures (K)',
        ),
    ]
    delta_half_width: Annotated[
        float, Field(default=2.0, gt=0, description='Wigner grid half-width')
    ]
    delta_step: Annotated[float, Field(default=0.05, gt=0, description='Wigner grid step')]
    n_max: Annotated[
        int,
        Field(
            default_factory=lambda: settings.DEFAULT_N_MAX,
            ge=0,
            description='Largest phonon number',
        ),
    ]

    @field_validator('temperatures')
    @classmethod
    def _increasing(cls, value: list[float]) -> list[float]:
        if any(not (math.isfinite(t) and t >= 0) for t in value):
            raise ValueError('temperatures must be finite and nonnegative')
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError('temperatures must be strictly increasing')
        return value

    @model_validator(mode='after')
    def _time_window(self) -> 'GridsSection':
        if self.time_stop < self.time_start:
            raise ValueError('time_stop must not precede time_start')
        return self

    def time_points(self) -> list[float]:
        count = math.floor((self.time_stop - self.time_start) / self.time_step + 1e-9) + 1
        return [self.time_start + i * self.time_step for i in range(count)]

    def delta_axis(self) -> np.ndarray:
        count = int(round(2.0 * self.delta_half_width / self.delta_step)) + 1
        return self.delta_half_width * np.linspace(-1.0, 1.0, count)


class OutputSection(BaseSchema):
    """[output] table"""

    directory: Annotated[
        str,
        Field(
            default_factory=lambda: settings.OUTPUT_DIR,
            min_length=1,
            description='Output directory',
        ),
    ]


class RunConfig(BaseSchema):
    """
    Complete run configuration

    Every table is optional; an empty file runs the default time sweep.
    """

    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    params: ParamsSection = Field(default_factory=ParamsSection)
    grids: GridsSection = Field(default_factory=GridsSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @property
    def kind(self) -> ExperimentKind:
        return self.experiment.kind

    def physical_params(self) -> PhysicalParams:
        return self.params.resolve(self.experiment.kind)

    def config_hash(self) -> str:
        """First 12 hex digits of SHA-256 over the resolved, location-free config"""
        payload: dict[str, Any] = {
            'config': self.model_dump(
                mode='json', exclude={'output': True, 'experiment': {'threads'}}
            ),
            'resolved': self.physical_params().model_dump(mode='json'),
        }
        encoded = json.dumps(payload, sort_keys=True, separators=(',', ':')).encode('utf-8')
        return hashlib.sha256(encoded).hexdigest()[:12]

    def output_path(self) -> Path:
        return Path(self.output.directory) / f'{self.kind.value}_{self.config_hash()}.csv'


class SweepRecord(BaseSchema):
    """One CSV row keyed by column name"""

    values: dict[str, float]

    @field_validator('values')
    @classmethod
    def _finite(cls, value: dict[str, float]) -> dict[str, float]:
        bad = [name for name, entry in value.items() if not math.isfinite(entry)]
        if bad:
            raise ValueError(f'non-finite values in columns {bad}')
        return value

    def row(self, columns: tuple[str, ...]) -> list[float]:
        return [self.values[name] for name in columns]


class RunOutcome(NamedTuple):
    """Exit code of a run and the CSV it produced"""

    exit_code: int
    path: Path | None


_COEFFICIENT_COLUMNS = ('a0_a1', 'brr_over_a1', 'bri_over_a1', 'bii_over_a1')
_OBSERVABLE_COLUMNS = ('fidelity', 'n_eff', 'log_negativity')


def _probability_columns(n_max: int) -> tuple[str, ...]:
    return tuple(f'p{n}' for n in range(n_max + 1)) + ('remainder',)


def experiment_columns(kind: ExperimentKind, n_max: int) -> tuple[str, ...]:
    """Fixed column order of each experiment"""
    if kind is ExperimentKind.TIME_SWEEP:
        return ('t', 'omega_m_t') + _OBSERVABLE_COLUMNS + _COEFFICIENT_COLUMNS
    if kind is ExperimentKind.TEMP_SWEEP:
        return ('temperature',) + _OBSERVABLE_COLUMNS + _probability_columns(n_max)
    if kind is ExperimentKind.FIDELITY_MAP:
        return ('temperature', 't', 'omega_m_t') + _OBSERVABLE_COLUMNS
    if kind is ExperimentKind.WIGNER_GRID:
        return ('delta_r', 'delta_i', 'wigner', 'target_wigner')
    if kind is ExperimentKind.OPTIMUM:
        return (
            ('t_opt', 'omega_m_t_opt') + _OBSERVABLE_COLUMNS + _COEFFICIENT_COLUMNS
            + ('c_quad_11', 'c_quad_12', 'c_quad_22')
        )
    return (
        ('temperature',) + _OBSERVABLE_COLUMNS + _COEFFICIENT_COLUMNS
        + _probability_columns(n_max)
    )
