"""Functionals along trajectories and the checks of their monotonicity."""

from .functionals import (
    CutTrajectory,
    alpha,
    alpha_cut,
    anchor_at_t0,
    check_grid,
    cut_angle_bound,
    find_t0,
    phase_dot,
)
from .lemmas import MonotonicityReport, build_report, check_lemma_suite
from .order import OrderStatisticsFrame, check_F_monotone, limit_rank_velocities, order_frame

__all__ = [
    "CutTrajectory",
    "MonotonicityReport",
    "OrderStatisticsFrame",
    "alpha",
    "alpha_cut",
    "anchor_at_t0",
    "build_report",
    "check_F_monotone",
    "check_grid",
    "check_lemma_suite",
    "cut_angle_bound",
    "find_t0",
    "limit_rank_velocities",
    "order_frame",
    "phase_dot",
]
