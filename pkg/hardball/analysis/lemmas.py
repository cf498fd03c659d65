"""Monotonicity and dominance checks for the angle and norm functionals."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hardball.analysis.functionals import CutTrajectory, alpha, check_grid
from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.collision import angle_between
from hardball.engine.events import Side, Trajectory

logger = logging.getLogger(__name__)

# an angle jump across a collision must be at least this negative
STRICT_JUMP = 1e-12


@dataclass(frozen=True)
class MonotonicityReport:
    claim: str
    sample_times: Tuple[float, ...]
    observed_values: Tuple[Any, ...]
    worst_violation: float
    passed: bool
    strict_failures: int = 0
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "strict_failures": self.strict_failures,
            "samples": len(self.sample_times),
            "notes": list(self.notes),
        }


def build_report(
    claim: str,
    sample_times: Sequence[float],
    observed_values: Sequence[Any],
    worst_violation: float,
    tolerance: float,
    strict_failures: int = 0,
    notes: Sequence[str] = (),
) -> MonotonicityReport:
    passed = worst_violation <= tolerance and strict_failures == 0
    if not passed:
        logger.info(
            "claim_failed",
            extra={"claim": claim, "worst_violation": worst_violation, "strict_failures": strict_failures},
        )
    return MonotonicityReport(
        claim=claim,
        sample_times=tuple(sample_times),
        observed_values=tuple(observed_values),
        worst_violation=float(worst_violation),
        passed=passed,
        strict_failures=strict_failures,
        notes=tuple(notes),
    )


def _largest_increase(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    return max(0.0, float(np.max(np.diff(np.asarray(values, dtype=float)))))


def _pairwise_angles(vectors: np.ndarray) -> np.ndarray:
    """Angle matrix between the rows of ``vectors``."""
    units = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    diff = np.linalg.norm(units[:, None, :] - units[None, :, :], axis=-1)
    summ = np.linalg.norm(units[:, None, :] + units[None, :, :], axis=-1)
    return 2.0 * np.arctan2(diff, summ)


def _cut_angle(cut: Optional[CutTrajectory], traj: Trajectory, t: float, tolerances: Tolerances) -> float:
    state = traj.evaluate(t) if cut is None else cut.evaluate(t)
    return angle_between(state.phase_position, state.phase_velocity, tolerances)


def _cut_positions(cut: Optional[CutTrajectory], traj: Trajectory, times: Sequence[float]) -> np.ndarray:
    if cut is None:
        return np.array([traj.evaluate(t).phase_position for t in times])
    return np.array([cut.position(t) for t in times])


def check_angle_decreasing(
    traj: Trajectory, grid: Sequence[float], cuts: Sequence[CutTrajectory], tolerances: Tolerances
) -> MonotonicityReport:
    values = [alpha(traj, t, tolerances=tolerances) for t in grid]
    worst = _largest_increase(values)
    for cut in cuts:
        cut_grid = sorted(set(grid) | {cut.cut_time})
        worst = max(worst, _largest_increase([_cut_angle(cut, traj, t, tolerances) for t in cut_grid]))

    strict_failures = 0
    notes: List[str] = []
    lo, hi = (grid[0], grid[-1]) if grid else (0.0, -1.0)
    for ev in traj.events:
        if not lo <= ev.time <= hi:
            continue
        jump = alpha(traj, ev.time, Side.RIGHT, tolerances) - alpha(traj, ev.time, Side.LEFT, tolerances)
        if jump >= -STRICT_JUMP:
            strict_failures += 1
            notes.append(f"angle jump {jump!r} at collision t={ev.time!r} pair {ev.pair}")
    return build_report("lemma_angle_dwn", grid, values, worst, tolerances.mono, strict_failures, notes)


def check_angle_cut(
    traj: Trajectory, grid: Sequence[float], cuts: Sequence[CutTrajectory], tolerances: Tolerances
) -> MonotonicityReport:
    angles = {cut.cut_time: [_cut_angle(cut, traj, t, tolerances) for t in grid] for cut in cuts}
    full = [_cut_angle(None, traj, t, tolerances) for t in grid]
    worst = 0.0
    for cut in cuts:
        worst = max(worst, max((a - b for a, b in zip(full, angles[cut.cut_time])), default=0.0))
    for u, w in combinations(sorted(angles), 2):
        worst = max(worst, max((a - b for a, b in zip(angles[w], angles[u])), default=0.0))
    return build_report("lemma_angle_cut", grid, full, worst, tolerances.mono)


def check_norm_bound(
    traj: Trajectory, grid: Sequence[float], cuts: Sequence[CutTrajectory], tolerances: Tolerances
) -> MonotonicityReport:
    full = np.linalg.norm(_cut_positions(None, traj, grid), axis=1)
    norms = {cut.cut_time: np.linalg.norm(_cut_positions(cut, traj, grid), axis=1) for cut in cuts}
    worst = 0.0
    ordered = sorted(norms)
    for u in ordered:
        worst = max(worst, float(np.max((norms[u] - full) / np.maximum(1.0, full))))
    for u, w in combinations(ordered, 2):
        worst = max(worst, float(np.max((norms[u] - norms[w]) / np.maximum(1.0, norms[w]))))
    return build_report("lemma_norm_bound", grid, tuple(full), max(worst, 0.0), tolerances.mono)


def check_angle_x(
    traj: Trajectory, grid: Sequence[float], cuts: Sequence[CutTrajectory], tolerances: Tolerances
) -> MonotonicityReport:
    worst = 0.0
    by_time = sorted(cuts, key=lambda c: c.cut_time)
    for i, inner in enumerate(by_time):
        times = [t for t in grid if t >= inner.cut_time]
        if len(times) < 2:
            continue
        reference = _pairwise_angles(_cut_positions(inner, traj, times))
        dominated = [_pairwise_angles(_cut_positions(None, traj, times))]
        dominated += [_pairwise_angles(_cut_positions(outer, traj, times)) for outer in by_time[i + 1 :]]
        for angles in dominated:
            worst = max(worst, float(np.max(angles - reference)))
    return build_report("lemma_angle_x", grid, (), max(worst, 0.0), tolerances.mono)


def check_norm_increasing(traj: Trajectory, grid: Sequence[float], tolerances: Tolerances) -> MonotonicityReport:
    norms = np.linalg.norm(_cut_positions(None, traj, grid), axis=1)
    times = np.asarray(grid, dtype=float)
    worst = 0.0
    forward = norms[times >= 0.0]
    if forward.size > 1:
        worst = max(worst, float(np.max((forward[:-1] - forward[1:]) / np.maximum(1.0, forward[1:]))))
    backward = norms[times <= 0.0]
    if backward.size > 1:
        worst = max(worst, float(np.max((backward[1:] - backward[:-1]) / np.maximum(1.0, backward[:-1]))))
    return build_report("lemma_norm_increasing", grid, tuple(norms), max(worst, 0.0), tolerances.mono)


def check_lemma_suite(
    traj: Trajectory,
    cut_times: Sequence[float],
    samples: Sequence[float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> List[MonotonicityReport]:
    """All angle and norm claims on a trajectory anchored so that t0 = 0.

    ``cut_times`` must be non-negative; the sample grid is refined with the
    event times and cut times in its range plus midpoints.
    """
    grid = check_grid(traj, samples, extra=[0.0] + [u for u in cut_times if samples and min(samples) <= u <= max(samples)])
    cuts = [CutTrajectory(traj, float(u)) for u in sorted(set(cut_times))]
    reports = [
        check_angle_decreasing(traj, grid, cuts, tolerances),
        check_angle_cut(traj, grid, cuts, tolerances),
        check_norm_bound(traj, grid, cuts, tolerances),
        check_angle_x(traj, grid, cuts, tolerances),
        check_norm_increasing(traj, grid, tolerances),
    ]
    logger.debug(
        "lemma_suite_finished",
        extra={"grid": len(grid), "cuts": len(cuts), "failed": [r.claim for r in reports if not r.passed]},
    )
    return reports
