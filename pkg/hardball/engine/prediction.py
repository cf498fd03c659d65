"""Time-of-impact prediction for ballistic pairs."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.state import SystemState


def quadratic_roots(a: float, b_half: float, c: float) -> Optional[Tuple[float, float]]:
    """Real roots of a·t² + 2·b_half·t + c = 0 for a > 0, sorted ascending.

    The larger-magnitude root is taken first and the other one comes from the
    product of the roots, so neither is formed by cancellation.
    """
    if a <= 0.0:
        return None
    disc = b_half * b_half - a * c
    if disc < 0.0:
        return None
    q = -(b_half + math.copysign(math.sqrt(disc), b_half))
    if q == 0.0:
        return 0.0, 0.0
    r1, r2 = q / a, c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def relative_motion(state: SystemState, j: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    return state.positions[j] - state.positions[k], state.velocities[j] - state.velocities[k]


def predict_pair_collision(
    state: SystemState, j: int, k: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Optional[float]:
    """Offset dt >= 0 until balls j and k touch while approaching, if ever.

    Solves |Δx + tΔv|² = 4. Receding pairs, parallel motion and grazing
    trajectories (discriminant within tol_zero) return None.
    """
    dx, dv = relative_motion(state, j, k)
    b = float(dx @ dv)
    if b >= 0.0:
        return None
    a = float(dv @ dv)
    if a <= tolerances.zero * tolerances.zero:
        return None
    c = float(dx @ dx) - 4.0
    disc = b * b - a * c
    if disc <= 0.0:
        return None
    root = math.sqrt(disc)
    if root <= tolerances.zero:
        return None
    # smaller root (-b - root)/a written without cancellation
    return max(c / (-b + root), 0.0)
