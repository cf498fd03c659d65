"""Configuration package exposing settings loader."""

from .schema import DEFAULT_MAX_EVENTS, DEFAULT_TOLERANCES, Command, Generator, RunConfig, Settings, Tolerances
from .loader import load_settings, reload_settings

__all__ = [
    "Settings",
    "Tolerances",
    "RunConfig",
    "Command",
    "Generator",
    "DEFAULT_TOLERANCES",
    "DEFAULT_MAX_EVENTS",
    "load_settings",
    "reload_settings",
]
