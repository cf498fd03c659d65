import numpy as np
import pytest

from hardball.dynamics import is_normalized
from hardball.engine import simulate
from hardball.errors import InvalidInput, SamplingExhausted
from hardball.scenarios import (
    LinearSchedule,
    head_on,
    line_of_balls,
    perturb,
    random_admissible,
    search_max_collisions,
)


@pytest.mark.parametrize("n, expected", [(2, 1), (4, 6), (10, 45)])
def test_line_of_balls_collision_count(n, expected):
    scenario = line_of_balls(n)
    assert scenario.expected_collisions == expected
    traj = simulate(scenario.state)
    assert traj.collision_count == expected
    # only neighbours on the line can touch
    assert all(k - j == 1 for j, k in traj.pair_sequence)


def test_line_of_balls_is_normalized():
    assert is_normalized(line_of_balls(6, d=3).state)


def test_line_of_balls_rejects_touching_spacing():
    with pytest.raises(InvalidInput):
        line_of_balls(4, spacing=2.0)


def test_random_admissible_is_deterministic():
    a = random_admissible(5, 2, seed=42).state
    b = random_admissible(5, 2, seed=42).state
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.velocities, b.velocities)


def test_random_admissible_states_are_valid():
    for seed in range(200):
        state = random_admissible(5, 2, seed=seed).state
        assert state.min_gap() >= -1e-12
        assert is_normalized(state)


def test_random_admissible_gives_up_in_a_tiny_box():
    with pytest.raises(SamplingExhausted):
        random_admissible(5, 2, seed=0, box_scale=0.1)


def test_head_on_is_normalized_single_collision():
    scenario = head_on(3)
    assert is_normalized(scenario.state)
    assert simulate(scenario.state).collision_count == 1


def test_linear_schedule():
    schedule = LinearSchedule(10, 1.0, 0.0)
    assert schedule(0) == pytest.approx(1.0)
    assert schedule(5) == pytest.approx(0.5)
    assert schedule(10) == pytest.approx(0.0)


def test_perturb_stays_normalized(line4_state):
    moved = perturb(line4_state, np.random.default_rng(0), 0.1)
    assert is_normalized(moved)
    assert not np.allclose(moved.positions, line4_state.positions)


def test_search_two_balls_finds_one_collision():
    result = search_max_collisions(2, trials=20, seed=3)
    assert result.count == 1
    assert result.best.expected_collisions == 1


def test_search_three_balls_keeps_the_line_witness():
    result = search_max_collisions(3, trials=40, seed=1)
    assert result.count >= 3
    assert simulate(result.best.state).collision_count == result.count
    assert result.witnesses[result.count] is not None


@pytest.mark.slow
def test_search_from_random_start_reaches_three_collisions():
    result = search_max_collisions(3, trials=2000, seed=0, box_scale=3.0, from_line=False)
    assert result.best.params["from_line"] is False
    assert result.count >= 3
    assert simulate(result.best.state).collision_count == result.count
    # a planar witness, not the collinear start
    assert np.ptp(result.best.state.positions[:, 1]) > 0.0


def test_search_is_reproducible():
    first = search_max_collisions(3, trials=20, seed=7)
    second = search_max_collisions(3, trials=20, seed=7)
    assert first.count == second.count
    assert first.accepted == second.accepted
    assert np.array_equal(first.best.state.positions, second.best.state.positions)
