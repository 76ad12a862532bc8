"""
Simulation Exceptions

Every error raised by the library carries a human-readable ``detail`` and the
process exit code the simulate command maps it to.
"""


class SimulationError(Exception):
    """Base class for all simulation errors"""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParameterValidationError(SimulationError, ValueError):
    """An argument lies outside the domain of an operation"""

    exit_code = 2


class ConfigError(SimulationError):
    """Run configuration could not be loaded"""

    exit_code = 2


class ConfigParseError(ConfigError):
    """Run configuration is not valid TOML"""

    def __init__(self, detail: str, line: int | None = None, column: int | None = None):
        location = f' (line {line}, column {column})' if line is not None else ''
        super().__init__(f'{detail}{location}')
        self.line = line
        self.column = column


class ConfigValidationError(ConfigError):
    """Run configuration violates one or more field constraints"""

    def __init__(self, errors: list[str]):
        super().__init__('invalid configuration: ' + '; '.join(errors))
        self.errors = errors


class InstabilityError(SimulationError):
    """Drift matrix has an eigenvalue with nonnegative real part"""

    exit_code = 3

    def __init__(self, spectral_abscissa: float):
        super().__init__(
            f'linearized dynamics are unstable (spectral abscissa {spectral_abscissa:.6g} rad/s)'
        )
        self.spectral_abscissa = spectral_abscissa


class NumericalSelfCheckError(SimulationError):
    """An internal consistency check failed"""

    exit_code = 4


class QuadratureDisagreementError(NumericalSelfCheckError):
    """Closed-form and quadrature overlaps disagree"""

    def __init__(self, closed_form: float, quadrature: float):
        super().__init__(
            f'overlap mismatch: closed form {closed_form!r}, quadrature {quadrature!r}'
        )
        self.closed_form = closed_form
        self.quadrature = quadrature


class ConditioningError(SimulationError):
    """Photon subtraction is undefined for the given covariance"""

    exit_code = 4


class VacuumFieldError(ConditioningError):
    """The field block is vacuum, so a photon cannot be subtracted"""


class DegenerateMechanicalBlockError(ConditioningError):
    """The mechanical block determinant expression is not positive"""
