"""
CSV Writer

Writes one experiment to a CSV file preceded by `#` metadata lines. The
metadata records the resolved parameters, constant set and conventions; it
never holds timestamps, so identical configurations give identical files.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable

from src.configs.constants import get_constants
from src.configs.settings import settings
from src.contrib.schemas import ExperimentKind
from src.model.controller import derive_params
from .schemas import STEADY_RED_PRESET, RunConfig, SweepRecord


logger = logging.getLogger(__name__)


def metadata_lines(config: RunConfig) -> list[tuple[str, str]]:
    """Ordered `# key=value` pairs describing a run"""
    params = config.physical_params()
    derived = derive_params(params)
    constants = get_constants()

    lines: list[tuple[str, str]] = [
        ('app', f'{settings.APP_NAME} {settings.APP_VERSION}'),
        ('experiment', config.kind.value),
        ('config_hash', config.config_hash()),
        ('constants', constants.name),
        ('hbar', repr(constants.hbar)),
        ('k_boltzmann', repr(constants.k_boltzmann)),
        ('speed_of_light', repr(constants.speed_of_light)),
        ('kappa_convention', params.kappa_convention.value),
        ('covariance_convention', 'vacuum variance 1/2; conditioning blocks doubled'),
    ]
    if config.kind is ExperimentKind.STEADY_RED:
        pinned = ', '.join(sorted(STEADY_RED_PRESET))
        lines.append(('preset', f'steady_red pins {pinned}; other values reconstructed'))
    for name, value in params.model_dump(exclude={'kappa_convention'}).items():
        lines.append((f'param.{name}', repr(value)))
    for name, value in derived.model_dump().items():
        lines.append((f'derived.{name}', repr(value)))
    lines.append(('subtraction_time', repr(config.experiment.subtraction_time)))
    for name, value in config.grids.model_dump().items():
        lines.append((f'grid.{name}', repr(value)))
    return lines


def write_csv(
    path: Path,
    config: RunConfig,
    columns: tuple[str, ...],
    records: Iterable[SweepRecord],
) -> Path:
    """
    Write records in the given order

    Args:
        path: Destination file; parent directories are created
        config: Run configuration recorded in the header
        columns: Column order
        records: Rows in grid order

    Returns:
        Path: The written file

    Raises:
        Exception: Any failure while writing, after the partial file is removed
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with path.open('w', newline='', encoding='utf-8') as handle:
            for key, value in metadata_lines(config):
                handle.write(f'# {key}={value}\n')
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(columns)
            for record in records:
                writer.writerow([repr(float(value)) for value in record.row(columns)])
    except BaseException:
        path.unlink(missing_ok=True)
        raise

    logger.debug('wrote %s', path)
    return path
