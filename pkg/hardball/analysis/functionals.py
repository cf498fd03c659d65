"""Phase-space functionals along a trajectory: angles, cut trajectories, t0."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np

from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.collision import angle_between
from hardball.dynamics.state import SystemState
from hardball.engine.events import Side, Trajectory
from hardball.errors import InvalidInput, NotBracketed

logger = logging.getLogger(__name__)

_BISECTION_STEPS = 60


@dataclass(frozen=True, eq=False)
class CutTrajectory:
    """x_u(t): follows the trajectory up to u, then moves ballistically with v(u+)."""

    base: Trajectory
    cut_time: float
    anchor: SystemState = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "anchor", self.base.evaluate(self.cut_time, Side.RIGHT))

    @property
    def frozen_velocity(self) -> np.ndarray:
        return self.anchor.phase_velocity

    def evaluate(self, t: float, side: Side = Side.RIGHT) -> SystemState:
        u = self.cut_time
        if t < u or (t == u and side is Side.LEFT):
            return self.base.evaluate(t, side)
        return self.anchor.advanced(t - u)

    def position(self, t: float) -> np.ndarray:
        return self.evaluate(t).phase_position

    def velocity(self, t: float, side: Side = Side.RIGHT) -> np.ndarray:
        return self.evaluate(t, side).phase_velocity


def phase_dot(traj: Trajectory, t: float, side: Side = Side.RIGHT) -> float:
    """g(t) = x(t)·v(t±); slope |v|² between events, upward jumps at collisions."""
    state = traj.evaluate(t, side)
    return float(state.phase_position @ state.phase_velocity)


def alpha(traj: Trajectory, t: float, side: Side = Side.RIGHT, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Angle between x(t) and v(t+) (or v(t-) with ``side=Side.LEFT``)."""
    state = traj.evaluate(t, side)
    return angle_between(state.phase_position, state.phase_velocity, tolerances)


def alpha_cut(cut: CutTrajectory, t: float, side: Side = Side.RIGHT, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    state = cut.evaluate(t, side)
    return angle_between(state.phase_position, state.phase_velocity, tolerances)


def _bracket(traj: Trajectory) -> Tuple[float, float]:
    energy = traj.initial.energy
    if traj.backward_complete:
        ref = traj.first_event_time if traj.events else traj.initial.time
        lo = ref - (abs(phase_dot(traj, ref, Side.LEFT)) + 1.0) / energy
    else:
        lo = traj.start
    if traj.terminal:
        ref = traj.last_event_time if traj.events else traj.initial.time
        hi = ref + (abs(phase_dot(traj, ref)) + 1.0) / energy
    else:
        hi = traj.end
    return lo, hi


def find_t0(traj: Trajectory, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """The time where ∠(x(t), v(t+)) crosses pi/2, i.e. x·v+ changes sign.

    x·v+ is non-decreasing in t, so the crossing is unique; it is located by
    bisection to tol_t0.

    Raises:
        NotBracketed: the trajectory span does not contain the sign change.
    """
    lo, hi = _bracket(traj)
    g_lo, g_hi = phase_dot(traj, lo), phase_dot(traj, hi)
    if g_lo > 0.0 or g_hi < 0.0:
        raise NotBracketed(f"x·v does not change sign on [{lo!r}, {hi!r}] (values {g_lo!r}, {g_hi!r})")
    for _ in range(_BISECTION_STEPS):
        if hi - lo <= tolerances.t0:
            break
        mid = 0.5 * (lo + hi)
        if phase_dot(traj, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    t0 = 0.5 * (lo + hi)
    logger.debug("t0_located", extra={"t0": t0, "width": hi - lo})
    return t0


def anchor_at_t0(traj: Trajectory, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[Trajectory, float]:
    """Relabel times so that t0 = 0. Returns the shifted trajectory and the old t0."""
    t0 = find_t0(traj, tolerances)
    return traj.shifted(-t0), t0


def cut_angle_bound(traj: Trajectory, t: float, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Tuple[float, float]:
    """Angle ∠(x_0(t), v(0+)) of the trajectory cut at 0, and its bound 2|x(0)|/t.

    The bound holds for t >= 18·sqrt(n)(n-1)|x(0)| on a t0-anchored trajectory.
    """
    if t <= 0.0:
        raise InvalidInput(f"t must be positive, got {t!r}")
    at_zero = traj.evaluate(0.0)
    x0 = at_zero.phase_position
    v0 = at_zero.phase_velocity
    angle = angle_between(x0 + t * v0, v0, tolerances)
    return angle, 2.0 * float(np.linalg.norm(x0)) / t


def check_grid(traj: Trajectory, samples: Iterable[float], extra: Iterable[float] = ()) -> List[float]:
    """Sample times plus event times in their range plus one midpoint per gap."""
    points = sorted({float(s) for s in samples} | {float(e) for e in extra})
    if not points:
        points = list(traj.event_times)
    if not points:
        return []
    lo, hi = points[0], points[-1]
    points = sorted(set(points) | {t for t in traj.event_times if lo <= t <= hi})
    mids = [0.5 * (a + b) for a, b in zip(points, points[1:]) if b > a]
    grid = sorted(set(points) | set(mids))
    return [t for t in grid if traj.contains(t) and math.isfinite(t)]
