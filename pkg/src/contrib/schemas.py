"""
Base Pydantic Schemas

Provides the base schema class, the shared matrix field type and the
enumerations used across the simulation.
"""

from enum import Enum
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel as PydanticBaseModel, BeforeValidator, ConfigDict, PlainSerializer


class BaseSchema(PydanticBaseModel):
    """
    Base Pydantic schema for all domain values

    Configuration:
    - extra='forbid': Reject any extra fields not defined in the schema
    - frozen=True: Values are immutable once validated
    - arbitrary_types_allowed=True: Permit numpy matrix fields
    """

    model_config = ConfigDict(
        extra='forbid',
        frozen=True,
        str_strip_whitespace=True,
        arbitrary_types_allowed=True,
    )


def _readonly_float_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    array.setflags(write=False)
    return array


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_readonly_float_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list, when_used='json'),
]


class ExperimentKind(str, Enum):
    """Experiment enumeration"""
    TIME_SWEEP = 'time_sweep'
    TEMP_SWEEP = 'temp_sweep'
    FIDELITY_MAP = 'fidelity_map'
    WIGNER_GRID = 'wigner_grid'
    OPTIMUM = 'optimum'
    STEADY_RED = 'steady_red'


class KappaConvention(str, Enum):
    """Cavity decay convention enumeration"""
    AMPLITUDE = 'amplitude'
    ENERGY = 'energy'
