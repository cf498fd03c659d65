"""Phase-space types and the equal-mass collision law."""

from .collision import (
    angle_between,
    approach_check,
    exchange_normal_components,
    is_normalized,
    normalize_frame,
    resolve_collision,
    time_reverse,
)
from .state import BallState, ContactFrame, Pair, SystemState

__all__ = [
    "BallState",
    "ContactFrame",
    "Pair",
    "SystemState",
    "angle_between",
    "approach_check",
    "exchange_normal_components",
    "is_normalized",
    "normalize_frame",
    "resolve_collision",
    "time_reverse",
]
