"""Contact graphs Γ_ρ(t) and ρ-connectedness over an interval."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Set, Tuple

import numpy as np

from hardball.clusters.unionfind import UnionFind
from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.state import Pair
from hardball.engine.events import Segment, Trajectory
from hardball.engine.prediction import quadratic_roots
from hardball.errors import InvalidInput, OutOfSpan


@dataclass(frozen=True, eq=False)
class ContactGraph:
    time: float
    rho: float
    adjacency: np.ndarray
    components: Tuple[Tuple[int, ...], ...]

    @property
    def edges(self) -> List[Pair]:
        n = self.adjacency.shape[0]
        return [(j, k) for j in range(n - 1) for k in range(j + 1, n) if self.adjacency[j, k]]

    def component_of(self, ball: int) -> Tuple[int, ...]:
        return next(c for c in self.components if ball in c)

    def joins(self, balls: Iterable[int]) -> bool:
        """True iff all ``balls`` sit in one component."""
        wanted = set(balls)
        return any(wanted <= set(c) for c in self.components)


def check_rho(rho: float) -> None:
    if not rho > 0.0:
        raise InvalidInput(f"rho must be positive, got {rho!r}")


def contact_graph(
    traj: Trajectory, t: float, rho: float, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ContactGraph:
    """Γ_ρ(t): an edge joins j and k iff |x^j(t) - x^k(t)| <= 2 + ρ."""
    check_rho(rho)
    state = traj.evaluate(t)
    adjacency = state.pair_distances() <= 2.0 + rho + tolerances.zero
    uf = UnionFind(state.n)
    for j, k in zip(*np.nonzero(np.triu(adjacency, 1))):
        uf.union(int(j), int(k))
    return ContactGraph(time=t, rho=rho, adjacency=adjacency, components=tuple(uf.components()))


def level_crossings(segment: Segment, j: int, k: int, level: float) -> List[float]:
    """Times in the segment where |x^j - x^k| equals ``level``."""
    base = segment.state
    dx = base.positions[j] - base.positions[k]
    dv = base.velocities[j] - base.velocities[k]
    roots = quadratic_roots(float(dv @ dv), float(dx @ dv), float(dx @ dx) - level * level)
    if roots is None:
        return []
    return [base.time + r for r in roots if segment.start <= base.time + r <= segment.end]


def _critical_times(traj: Trajectory, start: float, stop: float, level: float) -> Set[float]:
    times: Set[float] = {t for t in traj.event_times if start <= t <= stop}
    for segment in traj.segments(start, stop):
        n = segment.state.n
        for j in range(n - 1):
            for k in range(j + 1, n):
                times.update(level_crossings(segment, j, k, level))
    return times


def is_rho_connected(
    traj: Trajectory,
    balls: Iterable[int],
    interval: Tuple[float, float],
    rho: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> bool:
    """True iff ``balls`` stay in one component of Γ_ρ(t) for every t in the interval.

    The edge set can only change where some pair distance crosses 2 + ρ, so
    the check runs at the interval ends, every event, every crossing and one
    midpoint between consecutive critical times. An interval ending at +inf
    needs a terminal trajectory.
    """
    check_rho(rho)
    members = sorted(set(balls))
    if len(members) <= 1:
        return True
    s, u = interval
    if not traj.contains(s) or not (traj.contains(u) or (math.isinf(u) and traj.terminal)):
        raise OutOfSpan(u if traj.contains(s) else s, (traj.start, traj.end))
    critical = _critical_times(traj, s, u, 2.0 + rho) | {s}
    if math.isinf(u):
        u = max(critical) + 1.0
    critical.add(u)
    points = sorted(t for t in critical if s <= t <= u)
    grid = points + [0.5 * (a + b) for a, b in zip(points, points[1:])]
    for t in sorted(grid):
        if not contact_graph(traj, t, rho, tolerances).joins(members):
            return False
    return True
