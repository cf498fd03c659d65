"""Collision events and the piecewise-linear trajectory they define."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from hardball.dynamics.state import Pair, SystemState
from hardball.errors import InvalidState, OutOfSpan

VelocityPair = Tuple[np.ndarray, np.ndarray]


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, eq=False)
class CollisionEvent:
    time: float
    pair: Pair
    contact_axis: np.ndarray
    pre_velocities: VelocityPair
    post_velocities: VelocityPair
    # min over the other pairs of (distance - 2) at the event time
    min_other_gap: float = math.inf

    def shifted(self, offset: float) -> "CollisionEvent":
        return replace(self, time=self.time + offset)


@dataclass(frozen=True, eq=False)
class Segment:
    """A ballistic piece: ``state`` moves freely on [start, end]."""

    start: float
    end: float
    state: SystemState

    def positions_at(self, t: float) -> np.ndarray:
        return self.state.positions + (t - self.state.time) * self.state.velocities


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Initial state plus the ordered collision log.

    ``states[i]`` is the phase point right after ``events[i]`` (positions at
    the event time, velocities v(t+)). A ``terminal`` trajectory has no
    collision after its last event and extends ballistically to +inf; a
    ``backward_complete`` one has none before its first event and extends
    to -inf.
    """

    initial: SystemState
    events: Tuple[CollisionEvent, ...]
    states: Tuple[SystemState, ...]
    terminal: bool
    backward_complete: bool = False
    horizon: Optional[float] = None
    event_times: Tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.events) != len(self.states):
            raise InvalidState("one post-event state is required per event")
        times = tuple(ev.time for ev in self.events)
        if any(b < a for a, b in zip(times, times[1:])):
            raise InvalidState("event times must be non-decreasing")
        object.__setattr__(self, "event_times", times)

    @classmethod
    def from_events(
        cls,
        initial: SystemState,
        events: Sequence[CollisionEvent],
        terminal: bool,
        backward_complete: bool = False,
        horizon: Optional[float] = None,
    ) -> "Trajectory":
        """Rebuild the post-event states by replaying a log over ``initial``.

        The recorded post velocities are trusted as given; nothing is
        re-resolved, so a tampered log yields the tampered motion.
        """
        states: List[SystemState] = []
        current = initial
        for ev in events:
            if ev.time < current.time:
                raise InvalidState(f"event at t={ev.time!r} precedes t={current.time!r}")
            moved = current.advanced(ev.time - current.time)
            velocities = np.array(moved.velocities)
            j, k = ev.pair
            velocities[j] = ev.post_velocities[0]
            velocities[k] = ev.post_velocities[1]
            current = moved.with_velocities(velocities)
            states.append(current)
        return cls(initial, tuple(events), tuple(states), terminal, backward_complete, horizon)

    @property
    def n(self) -> int:
        return self.initial.n

    @property
    def dimension(self) -> int:
        return self.initial.dimension

    @property
    def collision_count(self) -> int:
        return len(self.events)

    @property
    def start(self) -> float:
        return -math.inf if self.backward_complete else self.initial.time

    @property
    def end(self) -> float:
        if self.terminal:
            return math.inf
        if self.horizon is not None:
            return self.horizon
        return self.event_times[-1] if self.events else self.initial.time

    @property
    def final_state(self) -> SystemState:
        return self.states[-1] if self.states else self.initial

    @property
    def first_event_time(self) -> Optional[float]:
        return self.event_times[0] if self.events else None

    @property
    def last_event_time(self) -> Optional[float]:
        return self.event_times[-1] if self.events else None

    @property
    def pair_sequence(self) -> List[Pair]:
        return [ev.pair for ev in self.events]

    @property
    def delta_observed(self) -> float:
        """Running minimum of ``min_other_gap`` over all events (inf if none)."""
        return min((ev.min_other_gap for ev in self.events), default=math.inf)

    def contains(self, t: float) -> bool:
        return self.start <= t <= self.end

    def evaluate(self, t: float, side: Side = Side.RIGHT) -> SystemState:
        """Exact phase point at t; velocities are v(t+) or v(t-) per ``side``."""
        if not self.contains(t):
            raise OutOfSpan(t, (self.start, self.end))
        if side is Side.RIGHT:
            idx = bisect_right(self.event_times, t)
        else:
            idx = bisect_left(self.event_times, t)
        base = self.states[idx - 1] if idx > 0 else self.initial
        dt = t - base.time
        return SystemState(t, base.positions + dt * base.velocities, base.velocities)

    def positions(self, t: float) -> np.ndarray:
        return self.evaluate(t).positions

    def velocities(self, t: float, side: Side = Side.RIGHT) -> np.ndarray:
        return self.evaluate(t, side).velocities

    def segments(self, start: Optional[float] = None, end: Optional[float] = None) -> Iterator[Segment]:
        """Ballistic pieces clipped to [start, end] (defaults: the whole span)."""
        lo = self.start if start is None else max(start, self.start)
        hi = self.end if end is None else min(end, self.end)
        bases = (self.initial,) + self.states
        bounds = (self.start,) + self.event_times + (self.end,)
        for i, base in enumerate(bases):
            seg_lo, seg_hi = max(bounds[i], lo), min(bounds[i + 1], hi)
            if seg_lo > seg_hi:
                continue
            yield Segment(seg_lo, seg_hi, base)

    def shifted(self, offset: float) -> "Trajectory":
        """The same evolution with every time relabelled to t + offset."""
        return Trajectory(
            initial=self.initial.shifted(offset),
            events=tuple(ev.shifted(offset) for ev in self.events),
            states=tuple(st.shifted(offset) for st in self.states),
            terminal=self.terminal,
            backward_complete=self.backward_complete,
            horizon=None if self.horizon is None else self.horizon + offset,
        )


def evaluate(traj: Trajectory, t: float, side: Side = Side.RIGHT) -> SystemState:
    return traj.evaluate(t, side)
