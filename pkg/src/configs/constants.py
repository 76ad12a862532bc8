"""
Physical Constants

Named constant sets used by the simulation. The active set is selected with
the PHONON_CONSTANTS setting so that regression numbers stay reproducible.
"""

from typing import NamedTuple

from src.configs.settings import settings


class PhysicalConstants(NamedTuple):
    """SI values of the constants entering the model."""

    name: str
    hbar: float  # J s
    k_boltzmann: float  # J / K
    speed_of_light: float  # m / s


CONSTANT_SETS: dict[str, PhysicalConstants] = {
    'codata2018': PhysicalConstants(
        name='codata2018',
        hbar=1.054571817e-34,
        k_boltzmann=1.380649e-23,
        speed_of_light=2.99792458e8,
    ),
}


def get_constants(name: str | None = None) -> PhysicalConstants:
    """
    Return the constant set registered under ``name``

    Args:
        name: Constant set name; defaults to settings.PHONON_CONSTANTS

    Returns:
        PhysicalConstants: The pinned values
    """
    return CONSTANT_SETS[name or settings.PHONON_CONSTANTS]
