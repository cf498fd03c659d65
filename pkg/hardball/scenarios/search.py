"""Randomised search for initial states with many collisions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, Tuple

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from hardball.config import DEFAULT_TOLERANCES, Tolerances
from hardball.dynamics.collision import normalize_frame
from hardball.dynamics.state import SystemState
from hardball.engine.simulator import simulate
from hardball.errors import (
    ContactDrift,
    EventBudgetExceeded,
    InvalidState,
    SimultaneousCollision,
    ZeroEnergy,
)
from hardball.scenarios.generators import Scenario, line_of_balls, random_admissible

logger = logging.getLogger(__name__)

PERTURBATION_SCALE = 0.1
EPOCH_TRIALS = 100

_SKIPPED = (SimultaneousCollision, EventBudgetExceeded, InvalidState, ContactDrift, ZeroEnergy)


class LinearSchedule:
    """Temperature falling linearly from ``t_initial`` to ``t_final`` over ``n_iter`` steps."""

    def __init__(self, n_iter: int, t_initial: float, t_final: float) -> None:
        self.n_iter = n_iter
        self.t_initial = t_initial
        self.t_final = t_final

    def __call__(self, i: int) -> float:
        frac = i / self.n_iter
        return self.t_final * frac + self.t_initial * (1.0 - frac)


@dataclass(frozen=True, eq=False)
class SearchResult:
    best: Scenario
    count: int
    delta_observed: float
    trials: int
    accepted: int
    # first state seen for each collision count
    witnesses: Dict[int, SystemState] = field(default_factory=dict)


def perturb(state: SystemState, rng: np.random.Generator, scale: float) -> SystemState:
    """Gaussian jitter of every coordinate, moved back to the normalized frame."""
    positions = state.positions + scale * rng.standard_normal(state.positions.shape)
    velocities = state.velocities + scale * rng.standard_normal(state.velocities.shape)
    return normalize_frame(SystemState(state.time, positions, velocities))


def _random_draw(n: int, d: int, rng: np.random.Generator, box_scale: float) -> SystemState:
    return random_admissible(n, d, seed=int(rng.integers(2**32)), box_scale=box_scale).state


@retry(
    retry=retry_if_exception_type(SimultaneousCollision),
    stop=stop_after_attempt(3),
    reraise=True,
)
def _draw_and_score(
    draw: Callable[[], SystemState], max_events: int, tolerances: Tolerances
) -> Tuple[SystemState, int, float]:
    """Simulate a freshly drawn candidate; a simultaneous collision triggers a new draw."""
    candidate = draw()
    traj = simulate(candidate, max_events=max_events, tolerances=tolerances)
    return candidate, traj.collision_count, traj.delta_observed


def search_max_collisions(
    n: int,
    d: int = 2,
    trials: int = 1000,
    seed: int = 0,
    max_events: int = 10_000,
    box_scale: float = 6.0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    from_line: bool = True,
) -> SearchResult:
    """Annealing walk over initial states, maximising the collision count.

    The chain starts from the collinear witness, or from a random placement
    when ``from_line`` is false, and alternates fresh random placements with
    Gaussian perturbations of the current state. The perturbation scale
    halves after every epoch without improvement. Trial seeds are spawned
    from ``seed``, so the search is reproducible.
    """
    schedule = LinearSchedule(trials, 1.0, 0.01)
    *children, opening = np.random.SeedSequence(seed).spawn(trials + 1)

    if from_line:
        witness = line_of_balls(n, d).state
        opening_draw: Callable[[], SystemState] = lambda: witness  # noqa: E731
    else:
        opening_draw = partial(_random_draw, n, d, np.random.default_rng(opening), box_scale)
    current, current_count, best_delta = _draw_and_score(opening_draw, max_events, tolerances)
    best, best_count = current, current_count
    witnesses: Dict[int, SystemState] = {current_count: current}
    scale = PERTURBATION_SCALE
    accepted = 0
    improved_in_epoch = False

    for i, child in enumerate(children):
        if i and i % EPOCH_TRIALS == 0:
            if not improved_in_epoch:
                scale /= 2.0
            improved_in_epoch = False
        rng = np.random.default_rng(child)
        if i % 2 == 0:
            draw = partial(_random_draw, n, d, rng, box_scale)
        else:
            draw = partial(perturb, current, rng, scale)

        try:
            candidate, count, delta = _draw_and_score(draw, max_events, tolerances)
        except _SKIPPED as exc:
            logger.debug("search_trial_skipped", extra={"trial": i, "reason": type(exc).__name__})
            continue

        witnesses.setdefault(count, candidate)
        temperature = schedule(i)
        if count >= current_count or rng.random() < math.exp((count - current_count) / temperature):
            current, current_count = candidate, count
            accepted += 1
        if count > best_count:
            best, best_count, best_delta = candidate, count, delta
            improved_in_epoch = True
            logger.info("search_improved", extra={"trial": i, "count": count, "delta_observed": delta})

    scenario = Scenario(
        name="search",
        params={"n": n, "d": d, "seed": seed, "trials": trials, "from_line": from_line},
        state=best,
        expected_collisions=best_count,
        provenance="search witness",
    )
    logger.info("search_finished", extra={"count": best_count, "accepted": accepted, "trials": trials})
    return SearchResult(scenario, best_count, best_delta, trials, accepted, witnesses)
