"""Order statistics of one coordinate and the partial sums F^r(t)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from hardball.analysis.lemmas import MonotonicityReport, build_report
from hardball.analysis.functionals import check_grid
from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.engine.events import Side, Trajectory
from hardball.errors import InvalidInput


@dataclass(frozen=True, eq=False)
class OrderStatisticsFrame:
    direction: int
    time: float
    sorted_positions: np.ndarray
    # permutation[r] is the ball holding rank r
    permutation: np.ndarray
    rank_velocities: np.ndarray
    partial_sums: np.ndarray


def _check_axis(traj: Trajectory, j: int) -> None:
    if not 0 <= j < traj.dimension:
        raise InvalidInput(f"axis {j} outside 0..{traj.dimension - 1}")


def order_frame(traj: Trajectory, j: int, t: float, side: Side = Side.RIGHT) -> OrderStatisticsFrame:
    """Rank the balls by coordinate j at time t, ties broken by ball index."""
    _check_axis(traj, j)
    state = traj.evaluate(t, side)
    coords = state.positions[:, j]
    perm = np.lexsort((np.arange(state.n), coords))
    w = state.velocities[perm, j]
    return OrderStatisticsFrame(
        direction=j,
        time=t,
        sorted_positions=coords[perm],
        permutation=perm,
        rank_velocities=w,
        partial_sums=np.cumsum(w),
    )


def _tie_notes(traj: Trajectory, j: int, lo: float, hi: float, tolerances: Tolerances) -> List[str]:
    notes: List[str] = []
    for ev in traj.events:
        if not lo <= ev.time <= hi:
            continue
        before = traj.evaluate(ev.time, Side.LEFT)
        after = traj.evaluate(ev.time, Side.RIGHT)
        for c in ev.pair:
            for m in range(traj.n):
                if m in ev.pair:
                    continue
                tied = abs(before.positions[c, j] - before.positions[m, j]) <= tolerances.simultaneous
                moving_apart = (
                    abs(before.velocities[c, j] - before.velocities[m, j]) > tolerances.zero
                    or abs(after.velocities[c, j] - after.velocities[m, j]) > tolerances.zero
                )
                if tied and moving_apart:
                    notes.append(f"rank tie of balls {c} and {m} on axis {j} at collision t={ev.time!r}")
    return notes


def check_F_monotone(
    traj: Trajectory,
    j: int,
    samples: Sequence[float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> MonotonicityReport:
    """Check that every F^r(t) along axis j is non-increasing.

    Evaluated on the samples, every event in their range (both one-sided
    limits) and the midpoints between them. The worst violation is the
    largest positive increment of any F^r.
    """
    _check_axis(traj, j)
    grid = check_grid(traj, samples)
    event_set = set(traj.event_times)
    points: List[Tuple[float, Side]] = []
    for t in grid:
        if t in event_set:
            points.append((t, Side.LEFT))
        points.append((t, Side.RIGHT))
    sums = np.array([order_frame(traj, j, t, side).partial_sums for t, side in points])
    worst = 0.0
    if len(points) > 1:
        worst = max(0.0, float(np.max(np.diff(sums, axis=0))))
    notes = _tie_notes(traj, j, grid[0], grid[-1], tolerances) if grid else []
    return build_report(
        f"F_monotone_axis{j}",
        [t for t, _ in points],
        [tuple(row) for row in sums],
        worst,
        tolerances.mono,
        notes=notes,
    )


def limit_rank_velocities(traj: Trajectory, j: int) -> np.ndarray:
    """w^k_j(inf): after the last collision the ranks end up sorted by velocity."""
    _check_axis(traj, j)
    if not traj.terminal:
        raise InvalidInput("limit rank velocities need a terminal trajectory")
    return np.sort(traj.final_state.velocities[:, j])
