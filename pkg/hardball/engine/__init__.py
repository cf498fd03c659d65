"""Collision prediction, scheduling and trajectory simulation."""

from .events import CollisionEvent, Segment, Side, Trajectory, evaluate
from .prediction import predict_pair_collision, quadratic_roots
from .simulator import EventScheduler, extend_backward, full_evolution, simulate, step_to_next_event

__all__ = [
    "CollisionEvent",
    "EventScheduler",
    "Segment",
    "Side",
    "Trajectory",
    "evaluate",
    "extend_backward",
    "full_evolution",
    "predict_pair_collision",
    "quadratic_roots",
    "simulate",
    "step_to_next_event",
]
