"""State files and event logs on disk.

States are single JSON objects, event logs are JSONL with a versioned header
line. Floats go through ``json``'s ``repr`` so every double survives a
write/read cycle unchanged.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from hardball.dynamics.state import SystemState
from hardball.engine.events import CollisionEvent, Trajectory
from hardball.errors import InvalidInput, InvalidState, SchemaVersionError

logger = logging.getLogger(__name__)

EVENT_LOG_SCHEMA = "hardball.events"
EVENT_LOG_VERSION = 1

PathLike = Union[Path, str]
Vector = List[float]


class StateRecord(BaseModel):
    """On-disk form of a :class:`SystemState`."""

    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(ge=2)
    time: float = 0.0
    centers: List[Vector]
    velocities: List[Vector]
    masses: Optional[List[float]] = None
    radii: Optional[List[float]] = None

    @classmethod
    def from_state(cls, state: SystemState) -> "StateRecord":
        return cls(
            dimension=state.dimension,
            time=float(state.time),
            centers=state.positions.tolist(),
            velocities=state.velocities.tolist(),
        )

    def to_state(self) -> SystemState:
        for label, rows in (("centers", self.centers), ("velocities", self.velocities)):
            if any(len(row) != self.dimension for row in rows):
                raise InvalidState(f"{label} rows must have length {self.dimension}")
        return SystemState.create(self.centers, self.velocities, self.time, self.masses, self.radii)


class EventRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    time: float
    pair: Tuple[int, int]
    contact_axis: Vector
    pre_velocities: Tuple[Vector, Vector]
    post_velocities: Tuple[Vector, Vector]
    # None stands for "no other pair" (n = 2)
    min_other_gap: Optional[float] = None

    @classmethod
    def from_event(cls, event: CollisionEvent) -> "EventRecord":
        gap = event.min_other_gap
        return cls(
            time=float(event.time),
            pair=event.pair,
            contact_axis=np.asarray(event.contact_axis).tolist(),
            pre_velocities=(np.asarray(event.pre_velocities[0]).tolist(), np.asarray(event.pre_velocities[1]).tolist()),
            post_velocities=(np.asarray(event.post_velocities[0]).tolist(), np.asarray(event.post_velocities[1]).tolist()),
            min_other_gap=float(gap) if math.isfinite(gap) else None,
        )

    def to_event(self) -> CollisionEvent:
        return CollisionEvent(
            time=self.time,
            pair=self.pair,
            contact_axis=np.asarray(self.contact_axis, dtype=float),
            pre_velocities=tuple(np.asarray(v, dtype=float) for v in self.pre_velocities),
            post_velocities=tuple(np.asarray(v, dtype=float) for v in self.post_velocities),
            min_other_gap=math.inf if self.min_other_gap is None else self.min_other_gap,
        )


class EventLogHeader(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_name: str = Field(default=EVENT_LOG_SCHEMA, alias="schema")
    version: int = EVENT_LOG_VERSION
    initial: StateRecord
    terminal: bool = False
    backward_complete: bool = False
    horizon: Optional[float] = None


def _dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, allow_nan=False)


class StateStore:
    """Read and write one state file."""

    def __init__(self, path: PathLike = "state.json") -> None:
        self._path = Path(path)

    @property
    def path(self) -> Path:
        return self._path

    def save(self, state: SystemState) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._path.write_text(_dumps(StateRecord.from_state(state).model_dump(exclude_none=True)) + "\n")
        logger.debug("state_saved", extra={"path": str(self._path), "n": state.n})

    def load(self) -> SystemState:
        """Parse the file into a state.

        Raises:
            InvalidInput: the file is missing or not a valid state record.
            UnsupportedGeometry: masses or radii other than 1.
        """
        try:
            record = StateRecord.model_validate_json(self._path.read_text())
        except (OSError, ValidationError) as e:
            logger.error("state_load_failed", extra={"path": str(self._path), "error": str(e)})
            raise InvalidInput(f"cannot read state file {self._path}: {e}") from e
        return record.to_state()

    def clear(self) -> None:
        if self._path.exists():
            self._path.unlink()


class EventLogWriter:
    """Writes a trajectory as a header line followed by one line per collision."""

    def __init__(self, path: PathLike) -> None:
        self._path = Path(path)

    def write(self, traj: Trajectory) -> Path:
        header = EventLogHeader(
            initial=StateRecord.from_state(traj.initial),
            terminal=traj.terminal,
            backward_complete=traj.backward_complete,
            horizon=traj.horizon,
        )
        lines = [_dumps(header.model_dump(by_alias=True, exclude_none=True))]
        lines.extend(_dumps(EventRecord.from_event(ev).model_dump()) for ev in traj.events)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._path.write_text("\n".join(lines) + "\n")
        logger.debug("event_log_written", extra={"path": str(self._path), "events": len(traj.events)})
        return self._path


def write_event_log(path: PathLike, traj: Trajectory) -> Path:
    return EventLogWriter(path).write(traj)


def read_event_log(path: PathLike) -> Trajectory:
    """Rebuild a trajectory from a JSONL event log.

    Raises:
        SchemaVersionError: the header names another schema or version.
        InvalidInput: the file is empty or a line does not parse.
    """
    path = Path(path)
    try:
        lines = [line for line in path.read_text().splitlines() if line.strip()]
    except OSError as e:
        raise InvalidInput(f"cannot read event log {path}: {e}") from e
    if not lines:
        raise InvalidInput(f"event log {path} is empty")

    try:
        raw_header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise InvalidInput(f"event log {path}: bad header: {e}") from e
    schema = raw_header.get("schema") if isinstance(raw_header, dict) else None
    version = raw_header.get("version") if isinstance(raw_header, dict) else None
    if schema != EVENT_LOG_SCHEMA or version != EVENT_LOG_VERSION:
        raise SchemaVersionError(str(schema), version if isinstance(version, int) else -1)

    try:
        header = EventLogHeader.model_validate(raw_header)
        events = [EventRecord.model_validate_json(line).to_event() for line in lines[1:]]
    except ValidationError as e:
        raise InvalidInput(f"event log {path}: {e}") from e

    traj = Trajectory.from_events(
        header.initial.to_state(),
        events,
        terminal=header.terminal,
        backward_complete=header.backward_complete,
        horizon=header.horizon,
    )
    logger.debug("event_log_read", extra={"path": str(path), "events": len(events)})
    return traj


def json_schemas() -> Dict[str, Dict[str, Any]]:
    """JSON schemas of the state file and of the event-log lines."""
    return {
        "state": StateRecord.model_json_schema(),
        "event_log": {
            "title": "hardball event log (JSONL)",
            "description": "First line is the header, every further line one event.",
            "header": EventLogHeader.model_json_schema(by_alias=True),
            "event": EventRecord.model_json_schema(),
        },
    }
