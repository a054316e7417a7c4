"""
General Configuration Settings

This module contains the environment-backed settings for the MoLe toolkit.
"""

import os
from typing import Optional

from core.error_handler import ConfigurationError

_TRUTHY = ('true', '1', 't', 'yes')
_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return float(raw.strip())
    except ValueError:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}")


class Settings:
    """Container for all toolkit settings."""

    def __init__(self):
        # Randomness
        seed = os.getenv('MOLE_SEED', '').strip()
        self.SEED: Optional[int] = None
        if seed:
            if not seed.isdigit() or int(seed) >= 2 ** 64:
                raise ConfigurationError(f"MOLE_SEED must be an unsigned 64-bit integer, got {seed!r}")
            self.SEED = int(seed)

        # Logging settings
        self.LOG_LEVEL = os.getenv('MOLE_LOG_LEVEL', 'INFO').strip().upper()
        if self.LOG_LEVEL not in _LEVELS:
            raise ConfigurationError(f"MOLE_LOG_LEVEL must be one of {', '.join(_LEVELS)}")
        self.LOG_DIR = os.getenv('MOLE_LOG_DIR', 'logs')
        self.LOG_TO_FILE = os.getenv('MOLE_LOG_TO_FILE', 'false').strip().lower() in _TRUTHY
        self.LOG_MAX_BYTES = _env_int('MOLE_LOG_MAX_BYTES', 10485760, minimum=1)  # 10MB
        self.LOG_BACKUP_COUNT = _env_int('MOLE_LOG_BACKUP_COUNT', 5)

        # Numerics
        self.COND_MAX = _env_float('MOLE_COND_MAX', 1e6)
        if not self.COND_MAX > 1:
            raise ConfigurationError("MOLE_COND_MAX must be greater than 1")
        self.MAX_CORE = _env_int('MOLE_MAX_CORE', 8192, minimum=1)
        self.WORKERS = _env_int('MOLE_WORKERS', 4, minimum=1)
        self.SSIM_WINDOW = _env_int('MOLE_SSIM_WINDOW', 8, minimum=2)

    def resolve_seed(self, flag_value: Optional[int]) -> int:
        """
        Pick the seed for a command: explicit flag, then MOLE_SEED, then 0.

        Args:
            flag_value: Value of the --seed flag, if given

        Returns:
            int: The seed to use
        """
        if flag_value is not None:
            return flag_value
        if self.SEED is not None:
            return self.SEED
        return 0


def load_settings() -> Settings:
    """Build a fresh Settings from the current environment."""
    return Settings()
