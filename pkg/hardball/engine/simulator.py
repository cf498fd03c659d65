"""Event-driven simulation: predict, advance, resolve, repeat."""

from __future__ import annotations

import heapq
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from hardball.config import DEFAULT_MAX_EVENTS, DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.collision import exchange_normal_components, time_reverse
from hardball.dynamics.state import ContactFrame, Pair, SystemState
from hardball.engine.events import CollisionEvent, Trajectory
from hardball.engine.prediction import predict_pair_collision
from hardball.errors import ContactDrift, EventBudgetExceeded, InvalidState, NotApproaching, SimultaneousCollision

logger = logging.getLogger(__name__)


class EventScheduler:
    """Min-heap of predicted collisions with lazy invalidation.

    Each entry remembers the collision counters of both balls when it was
    pushed; once either ball has collided again the entry is stale and is
    dropped on the way out.
    """

    def __init__(self, state: SystemState, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
        self._tolerances = tolerances
        self._heap: List[Tuple[float, int, int, int, int]] = []
        self._counts = [0] * state.n
        for j, k in state.pairs():
            self._push(state, j, k)

    def _push(self, state: SystemState, j: int, k: int) -> None:
        dt = predict_pair_collision(state, j, k, self._tolerances)
        if dt is not None:
            heapq.heappush(self._heap, (state.time + dt, j, k, self._counts[j], self._counts[k]))

    def peek(self) -> Optional[Tuple[float, int, int]]:
        while self._heap:
            t, j, k, cj, ck = self._heap[0]
            if cj == self._counts[j] and ck == self._counts[k]:
                return t, j, k
            heapq.heappop(self._heap)
        return None

    def pop(self) -> Tuple[float, int, int]:
        nxt = self.peek()
        if nxt is None:
            raise IndexError("no pending collision")
        heapq.heappop(self._heap)
        return nxt

    def refresh(self, state: SystemState, j: int, k: int) -> None:
        """Re-predict every pair involving j or k after they collided."""
        self._counts[j] += 1
        self._counts[k] += 1
        for m in range(state.n):
            if m != j and m != k:
                self._push(state, min(m, j), max(m, j))
                self._push(state, min(m, k), max(m, k))
        self._push(state, j, k)


def _chained_pairs(
    state: SystemState,
    j: int,
    k: int,
    last_hit: Sequence[Tuple[float, Optional[Pair]]],
    tolerances: Tolerances,
) -> List[Pair]:
    """Other collisions sharing a ball with (j, k) within tol_simultaneous of now."""
    chained: List[Pair] = []
    for ball in (j, k):
        when, pair = last_hit[ball]
        if pair is not None and pair != (j, k) and state.time - when <= tolerances.simultaneous:
            chained.append(pair)
    for m in range(state.n):
        if m == j or m == k:
            continue
        for ball in (j, k):
            pair = (min(m, ball), max(m, ball))
            dt = predict_pair_collision(state, pair[0], pair[1], tolerances)
            if dt is not None and dt <= tolerances.simultaneous:
                chained.append(pair)
    return sorted(set(chained))


def _apply_collision(
    state: SystemState, j: int, k: int, tolerances: Tolerances
) -> Tuple[SystemState, CollisionEvent]:
    """Resolve the collision of (j, k) in a state already advanced to contact."""
    frame = ContactFrame.of(state, j, k)
    drift = frame.distance - 2.0
    if abs(drift) > tolerances.drift_abort:
        raise ContactDrift((j, k), drift)
    v_j, v_k = state.velocities[j], state.velocities[k]
    normal_speed = float((v_j - v_k) @ frame.unit_axis)
    if normal_speed >= -tolerances.zero:
        raise NotApproaching((j, k), normal_speed)
    post_j, post_k = exchange_normal_components(v_j, v_k, frame.unit_axis)
    velocities = np.array(state.velocities)
    velocities[j], velocities[k] = post_j, post_k
    after = state.with_velocities(velocities)

    min_other_gap = math.inf
    if state.n > 2:
        dist = after.pair_distances()
        dist[j, k] = dist[k, j] = math.inf
        min_other_gap = float(dist.min() - 2.0)
        if min_other_gap < -tolerances.overlap:
            raise InvalidState(f"overlap of {min_other_gap!r} at t={state.time!r}")

    event = CollisionEvent(
        time=state.time,
        pair=(j, k),
        contact_axis=frame.unit_axis,
        pre_velocities=(np.array(v_j), np.array(v_k)),
        post_velocities=(post_j, post_k),
        min_other_gap=min_other_gap,
    )
    return after, event


def step_to_next_event(
    state: SystemState, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[SystemState, Optional[CollisionEvent]]:
    """Advance to the earliest collision from scratch and resolve it.

    Returns the input state and None when no pair will ever collide.

    Raises:
        SimultaneousCollision: another collision sharing a ball happens within
            tol_simultaneous of the earliest one.
    """
    best: Optional[Tuple[float, int, int]] = None
    for j, k in state.pairs():
        dt = predict_pair_collision(state, j, k, tolerances)
        if dt is not None and (best is None or dt < best[0]):
            best = (dt, j, k)
    if best is None:
        return state, None
    dt, j, k = best
    at = state.advanced(dt)
    no_history = [(-math.inf, None)] * state.n
    chained = _chained_pairs(at, j, k, no_history, tolerances)
    if chained:
        raise SimultaneousCollision(at.time, [(j, k)] + chained)
    return _apply_collision(at, j, k, tolerances)


def simulate(
    initial: SystemState,
    max_events: Optional[int] = None,
    horizon: Optional[float] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Trajectory:
    """Run the event loop from ``initial``.

    Stops when no pair will ever collide again (terminal trajectory) or when
    the next collision lies beyond the absolute time ``horizon``.

    Raises:
        SimultaneousCollision: chained contacts within tol_simultaneous.
        EventBudgetExceeded: more than ``max_events`` collisions; carries the
            partial trajectory.
        ContactDrift: a contact distance strayed beyond tol_drift_abort.
    """
    initial.validate(tolerances.overlap)
    budget = DEFAULT_MAX_EVENTS if max_events is None else max_events
    scheduler = EventScheduler(initial, tolerances)
    last_hit: List[Tuple[float, Optional[Pair]]] = [(-math.inf, None)] * initial.n
    events: List[CollisionEvent] = []
    states: List[SystemState] = []
    state = initial
    terminal = False

    while True:
        nxt = scheduler.peek()
        if nxt is None:
            terminal = True
            break
        t, j, k = nxt
        if horizon is not None and t > horizon:
            break
        if len(events) >= budget:
            partial = Trajectory(initial, tuple(events), tuple(states), terminal=False)
            logger.warning("event_budget_exceeded", extra={"max_events": budget, "time": t})
            raise EventBudgetExceeded(budget, partial)
        scheduler.pop()

        at = state.advanced(t - state.time)
        chained = _chained_pairs(at, j, k, last_hit, tolerances)
        if chained:
            raise SimultaneousCollision(t, [(j, k)] + chained)
        state, event = _apply_collision(at, j, k, tolerances)
        events.append(event)
        states.append(state)
        last_hit[j] = last_hit[k] = (t, (j, k))
        scheduler.refresh(state, j, k)

    logger.debug(
        "simulation_finished",
        extra={"n": initial.n, "events": len(events), "terminal": terminal, "horizon": horizon},
    )
    return Trajectory(initial, tuple(events), tuple(states), terminal=terminal, horizon=horizon)


def extend_backward(
    traj: Trajectory,
    max_events: Optional[int] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Trajectory:
    """Prepend every collision before ``traj.initial`` so the span reaches -inf.

    The time-reversed initial state is simulated forward; a backward collision
    at clock value r happened at real time 2s - r with the roles of pre and
    post velocities swapped and negated.
    """
    if traj.backward_complete:
        return traj
    s = traj.initial.time
    back = simulate(time_reverse(traj.initial), max_events=max_events, tolerances=tolerances)

    prepended = [
        CollisionEvent(
            time=2.0 * s - ev.time,
            pair=ev.pair,
            contact_axis=ev.contact_axis,
            pre_velocities=(-ev.post_velocities[0], -ev.post_velocities[1]),
            post_velocities=(-ev.pre_velocities[0], -ev.pre_velocities[1]),
            min_other_gap=ev.min_other_gap,
        )
        for ev in reversed(back.events)
    ]
    if prepended:
        earliest = back.final_state
        # one time unit before the earliest collision, moving with v(t-)
        initial = SystemState(2.0 * s - earliest.time - 1.0, earliest.positions + earliest.velocities, -earliest.velocities)
    else:
        initial = traj.initial
    logger.debug("backward_extended", extra={"prepended": len(prepended), "forward": len(traj.events)})
    return Trajectory.from_events(
        initial,
        prepended + list(traj.events),
        terminal=traj.terminal,
        backward_complete=True,
        horizon=traj.horizon,
    )


def full_evolution(
    initial: SystemState,
    max_events: Optional[int] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Trajectory:
    """The whole evolution on (-inf, inf) through ``initial``."""
    return extend_backward(simulate(initial, max_events=max_events, tolerances=tolerances), max_events, tolerances)
