"""
CLI Controller

Loads run configurations and executes the experiments:

- time_sweep: observables against the subtraction time
- temp_sweep: fidelity and phonon statistics against the initial temperature
- fidelity_map: observables over every (temperature, time) pair
- wigner_grid: the conditional Wigner function on a square phase-space grid
- optimum: the best subtraction time on the time grid
- steady_red: subtraction from the red-detuned steady state per temperature
"""

import logging
import math
import re
import tomllib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, TypeVar

import numpy as np
from pydantic import ValidationError

from src.conditioning.controller import (
    conditional_observables,
    find_optimal_subtraction_time,
    phonon_distribution,
    target_fock_wigner,
    wigner_eval,
)
from src.conditioning.schemas import ConditionalObservables
from src.contrib.exceptions import (
    ConfigParseError,
    ConfigValidationError,
    NumericalSelfCheckError,
    SimulationError,
)
from src.contrib.schemas import ExperimentKind
from src.model.schemas import PhysicalParams
from .schemas import RunConfig, RunOutcome, SweepRecord, experiment_columns
from .writer import write_csv


logger = logging.getLogger(__name__)

_TOML_LOCATION = re.compile(r'\s*\(at line (\d+), column (\d+)\)$')

T = TypeVar('T')
R = TypeVar('R')


def _validation_messages(exc: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
        for error in exc.errors()
    ]


def _toml_error(exc: tomllib.TOMLDecodeError) -> tuple[str, int | None, int | None]:
    # Older tomllib only reports the location inside the message.
    message = str(exc).splitlines()[0]
    match = _TOML_LOCATION.search(message)
    if match is None:
        return message, getattr(exc, 'lineno', None), getattr(exc, 'colno', None)
    return message[:match.start()], int(match.group(1)), int(match.group(2))


def parse_config(data: dict[str, Any]) -> RunConfig:
    """
    Validate a configuration mapping

    Raises:
        ConfigValidationError: Listing every violated field
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigValidationError(_validation_messages(exc)) from exc


def load_config(path: str | Path) -> RunConfig:
    """
    Load and validate a TOML run configuration

    Args:
        path: Configuration file

    Returns:
        RunConfig: Validated configuration with defaults filled in

    Raises:
        ConfigParseError: If the file cannot be read or is not valid TOML
        ConfigValidationError: If any field violates its constraints
    """
    path = Path(path)
    try:
        with path.open('rb') as handle:
            data = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        message, line, column = _toml_error(exc)
        raise ConfigParseError(f'{path}: {message}', line=line, column=column) from exc
    except OSError as exc:
        raise ConfigParseError(f'cannot read {path}: {exc.strerror}') from exc

    config = parse_config(data)
    logger.debug('loaded %s experiment from %s', config.kind.value, path)
    return config


def with_overrides(
    config: RunConfig,
    out: str | None = None,
    threads: int | None = None,
    experiment: ExperimentKind | str | None = None,
) -> RunConfig:
    """Apply command-line overrides and revalidate"""
    data = config.model_dump(exclude_unset=True)
    if out is not None:
        data.setdefault('output', {})['directory'] = out
    if threads is not None:
        data.setdefault('experiment', {})['threads'] = threads
    if experiment is not None:
        data.setdefault('experiment', {})['kind'] = experiment
    return parse_config(data)


def _ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int) -> list[R]:
    items = list(items)
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def _coefficient_values(obs: ConditionalObservables) -> dict[str, float]:
    w = obs.coefficients
    return {
        'a0_a1': float(w.a0 * w.a1),
        'brr_over_a1': float(w.brr / w.a1),
        'bri_over_a1': float(w.bri / w.a1),
        'bii_over_a1': float(w.bii / w.a1),
    }


def _observable_values(obs: ConditionalObservables) -> dict[str, float]:
    return {
        'fidelity': float(obs.fidelity),
        'n_eff': float(obs.n_eff),
        'log_negativity': float(obs.log_negativity),
    }


def _distribution_values(obs: ConditionalObservables, n_max: int) -> dict[str, float]:
    distribution = phonon_distribution(obs.coefficients, n_max)
    values = {f'p{n}': float(p) for n, p in enumerate(distribution.probs)}
    values['remainder'] = float(distribution.remainder)
    return values


def _time_sweep(config: RunConfig, params: PhysicalParams) -> list[SweepRecord]:
    def record(t: float) -> SweepRecord:
        obs = conditional_observables(params, t)
        return SweepRecord(values={
            't': t,
            'omega_m_t': params.mech_freq * t,
            **_observable_values(obs),
            **_coefficient_values(obs),
        })

    return _ordered_map(record, config.grids.time_points(), config.experiment.threads)


def _temperature_sweep(
    config: RunConfig,
    params: PhysicalParams,
    t: float,
    with_coefficients: bool,
) -> list[SweepRecord]:
    n_max = config.grids.n_max

    def record(temperature: float) -> SweepRecord:
        obs = conditional_observables(params.model_copy(update={'temperature': temperature}), t)
        values = {'temperature': temperature, **_observable_values(obs)}
        if with_coefficients:
            values.update(_coefficient_values(obs))
        values.update(_distribution_values(obs, n_max))
        return SweepRecord(values=values)

    return _ordered_map(record, config.grids.temperatures, config.experiment.threads)


def _fidelity_map(config: RunConfig, params: PhysicalParams) -> list[SweepRecord]:
    points = [
        (temperature, t)
        for temperature in config.grids.temperatures
        for t in config.grids.time_points()
    ]

    def record(point: tuple[float, float]) -> SweepRecord:
        temperature, t = point
        obs = conditional_observables(params.model_copy(update={'temperature': temperature}), t)
        return SweepRecord(values={
            'temperature': temperature,
            't': t,
            'omega_m_t': params.mech_freq * t,
            **_observable_values(obs),
        })

    return _ordered_map(record, points, config.experiment.threads)


def _wigner_grid(config: RunConfig, params: PhysicalParams) -> list[SweepRecord]:
    w = conditional_observables(params, config.experiment.subtraction_time).coefficients
    axis = config.grids.delta_axis()
    delta_r, delta_i = (grid.ravel() for grid in np.meshgrid(axis, axis, indexing='ij'))
    wigner = wigner_eval(w, delta_r, delta_i)
    target = target_fock_wigner(1, delta_r, delta_i)
    return [
        SweepRecord(values={
            'delta_r': float(r),
            'delta_i': float(i),
            'wigner': float(value),
            'target_wigner': float(reference),
        })
        for r, i, value, reference in zip(delta_r, delta_i, wigner, target)
    ]


def _optimum(config: RunConfig, params: PhysicalParams) -> list[SweepRecord]:
    best = find_optimal_subtraction_time(
        params, config.grids.time_points(), threads=config.experiment.threads
    )
    obs = conditional_observables(params, best.time)
    c_quad = obs.coefficients.c_quad
    return [SweepRecord(values={
        't_opt': best.time,
        'omega_m_t_opt': params.mech_freq * best.time,
        **_observable_values(obs),
        **_coefficient_values(obs),
        'c_quad_11': float(c_quad[0, 0]),
        'c_quad_12': float(c_quad[0, 1]),
        'c_quad_22': float(c_quad[1, 1]),
    })]


def build_records(config: RunConfig) -> list[SweepRecord]:
    """Evaluate every grid point of the configured experiment in grid order"""
    params = config.physical_params()
    kind = config.kind
    if kind is ExperimentKind.TIME_SWEEP:
        return _time_sweep(config, params)
    if kind is ExperimentKind.TEMP_SWEEP:
        return _temperature_sweep(config, params, config.experiment.subtraction_time, False)
    if kind is ExperimentKind.FIDELITY_MAP:
        return _fidelity_map(config, params)
    if kind is ExperimentKind.WIGNER_GRID:
        return _wigner_grid(config, params)
    if kind is ExperimentKind.OPTIMUM:
        return _optimum(config, params)
    return _temperature_sweep(config, params, math.inf, True)


def run(config: RunConfig) -> RunOutcome:
    """
    Run one experiment and write its CSV

    Args:
        config: Validated run configuration

    Returns:
        RunOutcome: Exit code (0 on success, the error's exit code otherwise)
            and the CSV path on success

    A failed run never removes a file left by an earlier run; write_csv
    cleans up only its own partial output.
    """
    path = config.output_path()
    logger.info('running %s -> %s', config.kind.value, path)
    try:
        records = build_records(config)
        write_csv(path, config, experiment_columns(config.kind, config.grids.n_max), records)
    except SimulationError as exc:
        logger.error('%s failed: %s', config.kind.value, exc.detail)
        return RunOutcome(exit_code=exc.exit_code, path=None)
    except ValidationError as exc:
        logger.error('%s produced invalid rows: %s', config.kind.value, exc)
        return RunOutcome(exit_code=NumericalSelfCheckError.exit_code, path=None)

    logger.info('%s finished with %d rows', config.kind.value, len(records))
    return RunOutcome(exit_code=0, path=path)
