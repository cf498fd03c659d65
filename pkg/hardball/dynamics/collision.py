"""Equal-mass elastic collision law and frame helpers."""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np

from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.state import ContactFrame, SystemState
from hardball.errors import NotApproaching, NotInContact, ZeroEnergy, ZeroVector

logger = logging.getLogger(__name__)


def normalize_frame(state: SystemState, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SystemState:
    """Move to the centre-of-mass frame and rescale to unit energy.

    Only a translation, a common velocity shift and a uniform speed rescale
    are applied, so the collision sequence is unchanged.

    Raises:
        ZeroEnergy: every ball moves with the same velocity.
    """
    velocities = state.velocities - state.velocities.mean(axis=0)
    speed = float(np.linalg.norm(velocities))
    if speed < tolerances.zero:
        raise ZeroEnergy("all velocities are equal; no collision can happen")
    positions = state.positions - state.positions.mean(axis=0)
    return SystemState(state.time, positions, velocities / speed)


def is_normalized(state: SystemState, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    tol = tolerances.conserve
    return (
        abs(state.energy - 1.0) <= tol
        and float(np.linalg.norm(state.momentum)) <= tol
        and float(np.linalg.norm(state.center_sum)) <= tol
    )


def approach_check(state: SystemState, j: int, k: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff touching balls j, k move towards each other.

    A normal relative velocity inside [-tol_zero, 0] counts as grazing, not approach.
    """
    frame = ContactFrame.of(state, j, k)
    if abs(frame.distance - 2.0) > tolerances.contact:
        raise NotInContact((j, k), frame.distance)
    relative = state.velocities[j] - state.velocities[k]
    return float(relative @ (frame.unit_axis * frame.distance)) < -tolerances.zero


def exchange_normal_components(
    v_j: np.ndarray, v_k: np.ndarray, unit_axis: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Swap the components of v_j and v_k along unit_axis.

    v_j+ = v_j - a u and v_k+ = v_k + a u with a = (v_j - v_k)·u.
    """
    a = float((v_j - v_k) @ unit_axis)
    return v_j - a * unit_axis, v_k + a * unit_axis


def resolve_collision(
    state: SystemState, j: int, k: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[np.ndarray, np.ndarray]:
    """Post-collision velocities (v_j(t+), v_k(t+)) of a touching, approaching pair.

    Raises:
        NotInContact: the centres are not 2 apart within tol_contact.
        NotApproaching: the pair is receding or grazing.
    """
    frame = ContactFrame.of(state, j, k)
    if not approach_check(state, j, k, tolerances):
        normal = float((state.velocities[j] - state.velocities[k]) @ frame.unit_axis)
        logger.debug("collision_rejected", extra={"pair": (j, k), "time": state.time, "normal_velocity": normal})
        raise NotApproaching((j, k), normal)
    return exchange_normal_components(state.velocities[j], state.velocities[k], frame.unit_axis)


def time_reverse(state: SystemState) -> SystemState:
    return SystemState(state.time, state.positions, -state.velocities)


def angle_between(w1: np.ndarray, w2: np.ndarray, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Unsigned angle in [0, pi] between two vectors of any (equal) shape.

    Evaluated as 2·atan2(|a - b|, |a + b|) on the unit vectors, which equals the
    clamped arccos of their dot product and stays accurate near 0 and pi.
    """
    a = np.asarray(w1, dtype=float).reshape(-1)
    b = np.asarray(w2, dtype=float).reshape(-1)
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a < tolerances.zero or norm_b < tolerances.zero:
        raise ZeroVector(f"angle against a zero vector (norms {norm_a!r}, {norm_b!r})")
    a = a / norm_a
    b = b / norm_b
    return 2.0 * math.atan2(float(np.linalg.norm(a - b)), float(np.linalg.norm(a + b)))
