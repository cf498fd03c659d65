"""Pydantic settings models for the hard-ball simulator."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Tolerances(BaseModel):
    """Numerical tolerances, in length or time units of a unit-energy system."""

    model_config = ConfigDict(frozen=True)

    contact: float = Field(default=1e-9, gt=0)
    overlap: float = Field(default=1e-9, gt=0)
    conserve: float = Field(default=1e-9, gt=0)
    zero: float = Field(default=1e-12, gt=0)
    simultaneous: float = Field(default=1e-9, gt=0)
    mono: float = Field(default=1e-8, gt=0)
    t0: float = Field(default=1e-9, gt=0)
    drift_abort: float = Field(default=1e-6, gt=0)


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_MAX_EVENTS = 1_000_000


class Command(str, Enum):
    SIMULATE = "simulate"
    VERIFY = "verify"
    BOUNDS = "bounds"
    SEARCH = "search"
    CLUSTER = "cluster"


class Generator(str, Enum):
    LINE = "line"
    RANDOM = "random"
    HEAD_ON = "head-on"


SCENARIO_COMMANDS = {Command.SIMULATE, Command.VERIFY, Command.CLUSTER}


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    command: Command
    state_file: Optional[Path] = None
    events_file: Optional[Path] = None
    generator: Optional[Generator] = None

    n: int = Field(default=4, ge=2)
    d: int = Field(default=2, ge=2)
    seed: int = 0
    spacing: float = Field(default=3.0, gt=2)
    box_scale: float = Field(default=6.0, gt=0)

    rho: float = Field(default=0.2, gt=0)
    delta: float = Field(default=0.5, gt=0, le=1)
    max_events: int = Field(default=DEFAULT_MAX_EVENTS, gt=0)
    horizon: Optional[float] = None
    samples: int = Field(default=20, ge=2)
    cuts: int = Field(default=5, ge=1)
    instances: int = Field(default=1, ge=1)
    trials: int = Field(default=1000, ge=1)

    out: Path = Path("out")
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @model_validator(mode="after")
    def _one_scenario_source(self) -> "RunConfig":
        sources = [s for s in (self.state_file, self.events_file, self.generator) if s is not None]
        if self.command in SCENARIO_COMMANDS and len(sources) != 1:
            raise ValueError("exactly one scenario source is required (--state, --events or --scenario)")
        if self.events_file is not None and self.command is not Command.VERIFY:
            raise ValueError("--events is only accepted by verify")
        return self


class Settings(BaseSettings):
    """Root settings object loaded from env/config files."""

    model_config = SettingsConfigDict(
        env_prefix="HARDBALL_",
        env_file=".env",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    threads: int = Field(default=4, ge=1)
    max_events: int = Field(default=DEFAULT_MAX_EVENTS, gt=0)
    log_level: str = "INFO"
    json_logs: bool = False
    tolerances: Tolerances = Field(default_factory=Tolerances)
