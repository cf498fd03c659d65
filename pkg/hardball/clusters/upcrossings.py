"""Upcrossings of the pair-distance band [2 + ρ/2, 2 + ρ].

For every pair the stopping times alternate: starting from τ_0 = s, an odd
time is the first moment the distance is at most 2 + ρ/2, the following
even time the first moment it exceeds 2 + ρ. σ counts the even times (after
τ_0) up to t and S sums σ over all pairs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from hardball.clusters.contact import check_rho
from hardball.dynamics.state import Pair
from hardball.engine.events import Segment, Trajectory
from hardball.engine.prediction import quadratic_roots
from hardball.errors import OutOfSpan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UpcrossingLedger:
    rho: float
    start: float
    stop: float
    # (τ_1, τ_2, ...) per pair, all within [start, stop]
    taus: Dict[Pair, Tuple[float, ...]]

    def sigma(self, pair: Pair) -> int:
        return len(self.taus.get(pair, ())) // 2

    @property
    def sigmas(self) -> Dict[Pair, int]:
        return {pair: self.sigma(pair) for pair in self.taus}

    @property
    def total(self) -> int:
        """S(start, stop)."""
        return sum(self.sigmas.values())

    def even_times(self, pair: Optional[Pair] = None) -> List[float]:
        """Finite τ_{2k}, k >= 1, for one pair or merged over all pairs."""
        pairs = [pair] if pair is not None else list(self.taus)
        times = [t for p in pairs for t in self.taus.get(p, ())[1::2]]
        return sorted(times)

    def min_even_spacing(self) -> float:
        """Smallest gap between consecutive even times of the same pair."""
        gaps = [b - a for p in self.taus for a, b in zip(self.even_times(p), self.even_times(p)[1:])]
        return min(gaps, default=math.inf)


def _distance_at(segment: Segment, j: int, k: int, t: float) -> float:
    x = segment.positions_at(t)
    return float(np.linalg.norm(x[j] - x[k]))


def _roots(segment: Segment, j: int, k: int, level: float) -> Optional[Tuple[float, float]]:
    base = segment.state
    dx = base.positions[j] - base.positions[k]
    dv = base.velocities[j] - base.velocities[k]
    roots = quadratic_roots(float(dv @ dv), float(dx @ dv), float(dx @ dx) - level * level)
    if roots is None:
        return None
    return base.time + roots[0], base.time + roots[1]


def _first_below(segment: Segment, j: int, k: int, cursor: float, level: float) -> Optional[float]:
    """First t >= cursor in the segment with distance <= level."""
    if _distance_at(segment, j, k, cursor) <= level:
        return cursor
    roots = _roots(segment, j, k, level)
    if roots is None:
        return None
    r1, r2 = roots
    if r1 >= cursor:
        return r1 if r1 <= segment.end else None
    # cursor sits inside [r1, r2] up to rounding
    return cursor if r2 >= cursor else None


def _first_above(segment: Segment, j: int, k: int, cursor: float, level: float) -> Optional[float]:
    """Infimum of t >= cursor in the segment with distance > level."""
    if _distance_at(segment, j, k, cursor) > level:
        return cursor
    roots = _roots(segment, j, k, level)
    if roots is None:
        return None
    r2 = max(roots[1], cursor)
    return r2 if r2 <= segment.end and math.isfinite(r2) else None


def pair_stopping_times(traj: Trajectory, j: int, k: int, start: float, stop: float, rho: float) -> Tuple[float, ...]:
    """τ_1, τ_2, ... for one pair on [start, stop]."""
    low, high = 2.0 + rho / 2.0, 2.0 + rho
    taus: List[float] = []
    seeking_low = True
    for segment in traj.segments(start, stop):
        cursor = segment.start
        while True:
            if seeking_low:
                hit = _first_below(segment, j, k, cursor, low)
            else:
                hit = _first_above(segment, j, k, cursor, high)
            if hit is None or not math.isfinite(hit):
                break
            taus.append(hit)
            seeking_low = not seeking_low
            cursor = hit
    return tuple(taus)


def upcrossings(traj: Trajectory, s: float, t: float, rho: float) -> UpcrossingLedger:
    """Exact stopping times of every pair on [s, t] (t = inf on terminal trajectories)."""
    check_rho(rho)
    if not traj.contains(s) or not (traj.contains(t) or (math.isinf(t) and traj.terminal)):
        raise OutOfSpan(t if traj.contains(s) else s, (traj.start, traj.end))
    n = traj.n
    taus = {(j, k): pair_stopping_times(traj, j, k, s, t, rho) for j in range(n - 1) for k in range(j + 1, n)}
    ledger = UpcrossingLedger(rho=rho, start=s, stop=t, taus=taus)
    logger.debug("upcrossings_counted", extra={"rho": rho, "total": ledger.total})
    return ledger
