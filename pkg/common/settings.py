"""
Settings
Environment-driven configuration (.env aware)
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from common.errors import ConfigParseError

logger = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass(frozen=True)
class Settings:
    """
    Process-wide defaults

    Solver tolerances here are only defaults; a model config file may
    override them per model.
    """
    threads: int = 1
    log_level: str = 'WARNING'
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_iter: int = 200
    port: int = 5000


def _read(env, name, cast, default, valid):
    raw = env.get(name)
    if raw is None or raw.strip() == '':
        return default

    try:
        value = cast(raw.strip())
    except ValueError:
        raise ConfigParseError(f"{name}={raw!r} is not a valid {cast.__name__}")

    if not valid(value):
        raise ConfigParseError(f"{name}={raw!r} is out of range")

    return value


def load_settings(env=None):
    """
    Read settings from the environment

    Args:
        env: Mapping to read from (defaults to os.environ after loading .env)

    Returns:
        Settings instance
    """
    if env is None:
        load_dotenv()
        env = os.environ

    settings = Settings(
        threads=_read(env, 'MAGANISO_THREADS', int, 1, lambda v: v > 0),
        log_level=_read(env, 'MAGANISO_LOG_LEVEL', str.upper, 'WARNING', lambda v: v in LOG_LEVELS),
        abs_tol=_read(env, 'MAGANISO_ABS_TOL', float, 1e-14, lambda v: v >= 0),
        rel_tol=_read(env, 'MAGANISO_REL_TOL', float, 1e-12, lambda v: v > 0),
        max_iter=_read(env, 'MAGANISO_MAX_ITER', int, 200, lambda v: v > 0),
        port=_read(env, 'FLASK_PORT', int, 5000, lambda v: 0 < v < 65536),
    )

    logger.debug(f"Settings loaded: {settings}")
    return settings


@lru_cache(maxsize=1)
def get_settings():
    """Cached process settings"""
    return load_settings()
