"""Initial-state generators."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from hardball.dynamics.collision import normalize_frame
from hardball.dynamics.state import SystemState
from hardball.errors import InvalidInput, SamplingExhausted

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 100_000


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    params: Dict[str, Any]
    state: SystemState
    expected_collisions: Optional[int] = None
    provenance: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)


def line_of_balls(n: int, d: int = 2, spacing: float = 3.0) -> Scenario:
    """n balls on the first axis with n(n-1)/2 head-on collisions in total.

    Velocities follow v_i ∝ mean(2^k) - 2^i: strictly decreasing along the
    line with zero sum. Equal balls exchange velocities on impact, so the
    velocity values pass through each other like free particles and every
    pair of values crosses once; the crossings are distinct in time. Only
    neighbours on the line ever touch, so the same adjacent pair collides
    several times.
    """
    if n < 2 or d < 2:
        raise InvalidInput(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    if not spacing > 2.0:
        raise InvalidInput(f"spacing must exceed 2, got {spacing!r}")
    centers = np.zeros((n, d))
    centers[:, 0] = spacing * np.arange(1, n + 1)
    powers = 2.0 ** np.arange(n)
    velocities = np.zeros((n, d))
    velocities[:, 0] = powers.mean() - powers
    state = normalize_frame(SystemState(0.0, centers, velocities))
    return Scenario(
        name="line",
        params={"n": n, "d": d, "spacing": spacing},
        state=state,
        expected_collisions=n * (n - 1) // 2,
        provenance="collinear equal balls: every pair of velocity values crosses once, neighbours collide",
    )


def random_admissible(n: int, d: int = 2, seed: int = 0, box_scale: float = 6.0) -> Scenario:
    """Rejection-sampled non-overlapping centres with isotropic Gaussian velocities.

    Centres are drawn uniformly in a cube of side box_scale·n^{1/d}; the
    result is moved to the normalized frame. Deterministic in ``seed``.

    Raises:
        SamplingExhausted: MAX_REJECTIONS draws were rejected.
    """
    if n < 2 or d < 2:
        raise InvalidInput(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    if not box_scale > 0.0:
        raise InvalidInput(f"box_scale must be positive, got {box_scale!r}")
    rng = np.random.default_rng(seed)
    side = box_scale * n ** (1.0 / d)
    centers = np.empty((0, d))
    rejections = 0
    while len(centers) < n:
        candidate = rng.uniform(0.0, side, size=d)
        if len(centers) and np.min(np.linalg.norm(centers - candidate, axis=1)) < 2.0:
            rejections += 1
            if rejections >= MAX_REJECTIONS:
                raise SamplingExhausted(rejections)
            continue
        centers = np.vstack([centers, candidate])
    velocities = rng.standard_normal((n, d))
    state = normalize_frame(SystemState(0.0, centers, velocities))
    return Scenario(
        name="random",
        params={"n": n, "d": d, "seed": seed, "box_scale": box_scale},
        state=state,
        extra={"rejections": rejections},
    )


def head_on(d: int = 2, gap: float = 4.0) -> Scenario:
    """Two balls on the first axis approaching each other; surfaces ``gap`` apart."""
    if d < 2 or not gap > 0.0:
        raise InvalidInput(f"need d >= 2 and a positive gap, got d={d}, gap={gap!r}")
    half = 1.0 + gap / 2.0
    centers = np.zeros((2, d))
    centers[:, 0] = (-half, half)
    velocities = np.zeros((2, d))
    velocities[:, 0] = (1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0))
    return Scenario(
        name="head-on",
        params={"d": d, "gap": gap},
        state=SystemState(0.0, centers, velocities),
        expected_collisions=1,
        provenance="two balls collide at most once",
    )
