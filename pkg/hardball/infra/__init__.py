"""Logging setup and on-disk formats."""

from .logging import setup_logging
from .persistence import (
    EVENT_LOG_SCHEMA,
    EVENT_LOG_VERSION,
    EventLogHeader,
    EventLogWriter,
    EventRecord,
    StateRecord,
    StateStore,
    json_schemas,
    read_event_log,
    write_event_log,
)

__all__ = [
    "EVENT_LOG_SCHEMA",
    "EVENT_LOG_VERSION",
    "EventLogHeader",
    "EventLogWriter",
    "EventRecord",
    "StateRecord",
    "StateStore",
    "json_schemas",
    "read_event_log",
    "setup_logging",
    "write_event_log",
]
