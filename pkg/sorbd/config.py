"""
Library configuration management
Loads defaults for step sizes, thresholds and harness settings from environment variables
"""

import logging
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Library settings loaded from SORBD_* environment variables"""

    # Logging
    log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR'] = Field('INFO')

    # Verification parallelism
    verify_threads: int = Field(1, description="Worker threads for verification sample loops")

    # Oracle step sizes
    bicomplex_step: float = Field(1e-20)
    fd1_step: float = Field(3e-4)
    fd2_step: float = Field(1e-5)

    # FDSVA-SO strategy crossover
    inner_crossover_n: int = Field(40)
    outer_crossover_n: int = Field(100_000)

    # Verification thresholds
    id_rmsre_threshold: float = Field(1e-10)
    fd_rmsre_threshold: float = Field(1e-8)

    # Benchmark harness
    bench_samples: int = Field(100)
    bench_warmups: int = Field(10)

    # Rotation re-normalisation
    renormalize_tol: float = Field(1e-10)

    # Contract checks
    debug_checks: bool = Field(False)

    class Config:
        env_prefix = 'SORBD_'
        env_file = '.env'
        env_file_encoding = 'utf-8'
        case_sensitive = False
        extra = 'ignore'

    @property
    def default_fd1_steps(self) -> tuple:
        """Finite-Diff-1 (h, k) pair"""
        return (self.fd1_step, self.fd1_step)

    def validate_settings(self) -> None:
        """Validate that numeric settings are usable"""
        errors = []

        for name in ('bicomplex_step', 'fd1_step', 'fd2_step',
                     'id_rmsre_threshold', 'fd_rmsre_threshold', 'renormalize_tol'):
            if getattr(self, name) <= 0:
                errors.append(f"{name} must be positive")

        for name in ('inner_crossover_n', 'outer_crossover_n', 'verify_threads', 'bench_samples'):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be at least 1")

        if self.bench_warmups < 0:
            errors.append("bench_warmups must not be negative")

        if errors:
            raise ValueError("Configuration errors: " + "; ".join(errors))


# Create global settings instance
settings = Settings()

# Validate settings on import; a bad environment falls back to warnings
try:
    settings.validate_settings()
except ValueError as e:
    logger.warning(f"{e}")
