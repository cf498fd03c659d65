"""Settings loading for the CLI and library defaults."""

from __future__ import annotations

import logging
from functools import lru_cache

from .schema import Settings

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    """Load HARDBALL_* variables (and .env) once per process."""

    settings = Settings()
    logger.debug(
        "settings_loaded",
        extra={"threads": settings.threads, "max_events": settings.max_events, "json_logs": settings.json_logs},
    )
    return settings


def reload_settings() -> Settings:
    """Drop the cached settings and read the environment again."""

    load_settings.cache_clear()
    return load_settings()
