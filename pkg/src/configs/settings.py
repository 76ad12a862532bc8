"""
Application Settings

Handles application configuration using Pydantic Settings.
Environment variables are automatically loaded from .env file.
"""

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables
    """

    # Application Configuration
    APP_NAME: str = Field(
        default='phononLab',
        description='Application name'
    )

    APP_VERSION: str = Field(
        default='0.1.0',
        description='Application version'
    )

    DEBUG: bool = Field(
        default=False,
        description='Debug mode (forces DEBUG log level)'
    )

    LOG_LEVEL: str = Field(
        default='INFO',
        description='Root log level for the simulate command'
    )

    # Physical Constants
    PHONON_CONSTANTS: Literal['codata2018'] = Field(
        default='codata2018',
        description='Pinned physical constant set'
    )

    # Numerical Configuration
    QUADRATURE_STEP: float = Field(
        default=0.02,
        gt=0,
        description='Grid step of the phase-space quadrature'
    )

    QUADRATURE_HALF_WIDTH: float = Field(
        default=8.0,
        gt=0,
        description='Half-width of the square quadrature domain'
    )

    QUADRATURE_AGREEMENT_TOL: float = Field(
        default=1e-6,
        gt=0,
        description='Maximum allowed gap between closed-form and quadrature overlaps'
    )

    LYAPUNOV_RESIDUAL_TOL: float = Field(
        default=1e-10,
        gt=0,
        description='Relative residual bound of the steady-state Lyapunov solve'
    )

    # Run Defaults
    DEFAULT_N_MAX: int = Field(
        default=10,
        ge=0,
        description='Largest phonon number reported in distributions'
    )

    OUTPUT_DIR: str = Field(
        default='results',
        description='Directory receiving CSV output'
    )

    DEFAULT_THREADS: int = Field(
        default=1,
        ge=1,
        description='Worker threads used for grid evaluation'
    )

    class Config:
        """Pydantic configuration"""
        env_file = '.env'
        env_file_encoding = 'utf-8'
        case_sensitive = True


settings = Settings()
