"""Dense-cluster extraction from a collision history.

The range [start, inf) is cut at every even stopping time of every pair.
The busiest piece is cut again at the first collision of each pair that has
not collided earlier in that piece; in the busiest sub-piece, the pairs that
collided so far are grouped into classes joined through shared balls, and the
class with the most collisions is returned.
"""

from __future__ import annotations

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Dict, List, Sequence, Set, Tuple

from hardball.clusters.unionfind import UnionFind
from hardball.clusters.upcrossings import upcrossings
from hardball.dynamics.state import Pair
from hardball.engine.events import CollisionEvent, Trajectory
from hardball.errors import NoCollisions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DenseCluster:
    balls: Tuple[int, ...]
    interval: Tuple[float, float]
    count: int
    rho: float
    intervals: int
    total: int
    n: int

    @property
    def pigeonhole_floor(self) -> float:
        """total / (2 M n^4) with M the number of pieces of the first cut."""
        return self.total / (2.0 * self.intervals * self.n**4)


def _densest(events: Sequence[CollisionEvent], bounds: Sequence[float]) -> Tuple[int, List[CollisionEvent]]:
    """Index of the half-open piece [bounds[i], bounds[i+1]) holding most events (first on ties)."""
    pieces: List[List[CollisionEvent]] = [[] for _ in range(len(bounds) - 1)]
    for ev in events:
        piece = bisect_right(bounds, ev.time) - 1
        if 0 <= piece < len(pieces):
            pieces[piece].append(ev)
    best = max(range(len(pieces)), key=lambda i: (len(pieces[i]), -i))
    return best, pieces[best]


def dense_cluster_search(traj: Trajectory, rho: float, start: float = 0.0) -> DenseCluster:
    """Extract a ball set that collides often while staying ρ-connected.

    Raises:
        NoCollisions: no collision at or after ``start``.
    """
    events = [ev for ev in traj.events if ev.time >= start]
    if not events:
        raise NoCollisions(f"no collision at or after t={start!r}")

    ledger = upcrossings(traj, start, traj.end, rho)
    cuts = sorted({t for t in ledger.even_times() if start < t < math.inf})
    bounds = [start] + cuts + [math.inf]
    piece, piece_events = _densest(events, bounds)
    piece_end = bounds[piece + 1]

    # first collision of each pair inside the piece
    seen: Set[Pair] = set()
    firsts: List[float] = []
    for ev in piece_events:
        if ev.pair not in seen:
            seen.add(ev.pair)
            if not firsts or firsts[-1] != ev.time:
                firsts.append(ev.time)
    sub_bounds = firsts + [piece_end]
    sub, sub_events = _densest(piece_events, sub_bounds)
    u_lo, u_hi = sub_bounds[sub], sub_bounds[sub + 1]

    # pairs that collided in [piece start, u_lo], grouped through shared balls
    collided = {ev.pair for ev in piece_events if ev.time <= u_lo}
    uf = UnionFind(traj.n).union_all(collided)
    counts: Dict[int, int] = {}
    for ev in sub_events:
        root = uf.find(ev.pair[0])
        counts[root] = counts.get(root, 0) + 1
    root = max(counts, key=lambda r: (counts[r], -r))
    balls = tuple(sorted({b for pair in collided for b in pair if uf.find(b) == root}))
    class_events = [ev for ev in sub_events if uf.find(ev.pair[0]) == root]

    t2 = u_hi if math.isfinite(u_hi) else max(ev.time for ev in class_events)
    cluster = DenseCluster(
        balls=balls,
        interval=(u_lo, t2),
        count=len(class_events),
        rho=rho,
        intervals=len(bounds) - 1,
        total=len(events),
        n=traj.n,
    )
    logger.debug(
        "dense_cluster_found",
        extra={"balls": list(balls), "count": cluster.count, "intervals": cluster.intervals, "total": cluster.total},
    )
    return cluster
