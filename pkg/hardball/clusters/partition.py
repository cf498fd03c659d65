"""Velocity-gap and position-gap partitions of the balls, and their separation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from hardball.clusters.unionfind import UnionFind
from hardball.engine.events import CollisionEvent, Trajectory
from hardball.errors import InvalidState, NoGap, OutOfSpan

logger = logging.getLogger(__name__)

SEPARATION_DISTANCE = 2.5


class PartitionKind(str, Enum):
    VELOCITY = "velocity"
    POSITION = "position"


@dataclass(frozen=True)
class Partition:
    n1: Tuple[int, ...]
    n2: Tuple[int, ...]
    separation_time: float
    gap_kind: PartitionKind
    threshold: float

    def __post_init__(self) -> None:
        if not self.n1 or not self.n2:
            raise InvalidState("both sides of a partition must be nonempty")
        if set(self.n1) & set(self.n2):
            raise InvalidState("partition sides overlap")

    def crosses(self, pair: Tuple[int, int]) -> bool:
        j, k = pair
        return (j in self.n1) != (k in self.n1)


def single_linkage(points: np.ndarray, threshold: float) -> List[Tuple[int, ...]]:
    """Clusters joined by chains of points less than ``threshold`` apart."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    close = np.sqrt(np.sum(diff * diff, axis=-1)) < threshold
    uf = UnionFind(len(pts))
    for j, k in zip(*np.nonzero(np.triu(close, 1))):
        uf.union(int(j), int(k))
    return uf.components()


def _split(components: Sequence[Tuple[int, ...]], anchor: int, n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    n1 = next(c for c in components if anchor in c)
    n2 = tuple(i for i in range(n) if i not in n1)
    return n1, n2


def velocity_gap_threshold(n: int) -> float:
    return 1.0 / (math.sqrt(n) * (n - 1))


def velocity_gap_partition(traj: Trajectory, T: float) -> Partition:
    """Split the velocities v^k(T+) where no chain of gaps below 1/(sqrt(n)(n-1)) joins them.

    N1 is the cluster of the fastest ball.

    Raises:
        NoGap: the velocities form a single cluster.
    """
    velocities = traj.velocities(T)
    n = traj.n
    threshold = velocity_gap_threshold(n)
    components = single_linkage(velocities, threshold)
    if len(components) == 1:
        raise NoGap(f"velocities at t={T!r} form one cluster at threshold {threshold!r}")
    fastest = int(np.argmax(np.linalg.norm(velocities, axis=1)))
    n1, n2 = _split(components, fastest, n)
    return Partition(n1, n2, T, PartitionKind.VELOCITY, threshold)


def _segment_min_distance(positions: np.ndarray, velocities: np.ndarray, j: int, k: int, span: float) -> float:
    """Smallest |x^j - x^k| over a ballistic piece of length ``span`` (may be inf)."""
    dx = positions[j] - positions[k]
    dv = velocities[j] - velocities[k]
    a = float(dv @ dv)
    tau = 0.0 if a == 0.0 else min(max(-float(dx @ dv) / a, 0.0), span)
    return float(np.linalg.norm(dx + tau * dv))


def min_cross_distance(traj: Trajectory, partition: Partition, start: float) -> float:
    """Exact minimum over t >= start of |x^l(t) - x^k(t)| for l in N1, k in N2."""
    if start > traj.end:
        raise OutOfSpan(start, (traj.start, traj.end))
    best = math.inf
    for segment in traj.segments(start):
        positions = segment.positions_at(segment.start)
        span = segment.end - segment.start
        for ell in partition.n1:
            for k in partition.n2:
                best = min(best, _segment_min_distance(positions, segment.state.velocities, ell, k, span))
    return best


def verify_separation(traj: Trajectory, partition: Partition, T_star: float) -> bool:
    """True iff every cross pair stays more than 5/2 apart on [T_star, end].

    Raises:
        OutOfSpan: the trajectory neither reaches T_star nor is terminal.
    """
    distance = min_cross_distance(traj, partition, T_star)
    separated = distance > SEPARATION_DISTANCE
    logger.debug("separation_checked", extra={"T_star": T_star, "min_distance": distance, "separated": separated})
    return separated


def cross_collisions_after(traj: Trajectory, partition: Partition, t: float) -> List[CollisionEvent]:
    return [ev for ev in traj.events if ev.time >= t and partition.crosses(ev.pair)]


def position_gap_partition(traj: Trajectory, s: float) -> Optional[Partition]:
    """Split the centres x^k(s) at threshold |x_0(s)| n^{-3/2}.

    x_0 is the trajectory cut at time 0, so |x_0(s)| = |x(0) + s v(0+)|. N1 is
    the cluster of one end of the widest pair. Returns None when the centres
    form a single chain.
    """
    n = traj.n
    at_zero = traj.evaluate(0.0)
    x0_s = float(np.linalg.norm(at_zero.phase_position + s * at_zero.phase_velocity))
    threshold = x0_s * n ** -1.5
    positions = traj.positions(s)
    components = single_linkage(positions, threshold)
    if len(components) == 1:
        return None
    diff = positions[:, None, :] - positions[None, :, :]
    widest = int(np.unravel_index(np.argmax(np.sum(diff * diff, axis=-1)), (n, n))[0])
    n1, n2 = _split(components, widest, n)
    return Partition(n1, n2, s, PartitionKind.POSITION, threshold)


def velocity_drift_after(traj: Trajectory, T: float) -> float:
    """max_k sup_{s,t >= T} |v^k(s+) - v^k(t+)|."""
    snapshots = [traj.velocities(T)] + [st.velocities for st, ev in zip(traj.states, traj.events) if ev.time > T]
    stack = np.array(snapshots)
    spread = stack[:, None, :, :] - stack[None, :, :, :]
    return float(np.max(np.linalg.norm(spread, axis=-1)))
