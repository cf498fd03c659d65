import math

import numpy as np
import pytest

from hardball.dynamics import SystemState, time_reverse
from hardball.engine import (
    Side,
    Trajectory,
    extend_backward,
    full_evolution,
    predict_pair_collision,
    quadratic_roots,
    simulate,
    step_to_next_event,
)
from hardball.errors import EventBudgetExceeded, OutOfSpan, SimultaneousCollision
from hardball.scenarios import random_admissible


def _two(dx, dv):
    return SystemState.create([[dx[0], dx[1]], [0.0, 0.0]], [[dv[0], dv[1]], [0.0, 0.0]])


def test_predict_pair_collision():
    assert predict_pair_collision(_two((-6.0, 0.0), (2.0, 0.0)), 0, 1) == pytest.approx(2.0)
    assert predict_pair_collision(_two((-6.0, 0.0), (0.0, 0.0)), 0, 1) is None
    assert predict_pair_collision(_two((-6.0, 0.0), (-2.0, 0.0)), 0, 1) is None
    # passes at distance 3 > 2
    assert predict_pair_collision(_two((-6.0, 3.0), (2.0, 0.0)), 0, 1) is None


def test_quadratic_roots_sorted_and_stable():
    r1, r2 = quadratic_roots(1.0, -1e8, 1.0)
    assert r1 == pytest.approx(5e-9)
    assert r2 == pytest.approx(2e8)
    assert quadratic_roots(1.0, 0.0, 1.0) is None


def test_step_to_next_event_head_on(head_on_state):
    after, event = step_to_next_event(head_on_state)
    assert event is not None
    assert event.time == pytest.approx(2.0 * math.sqrt(2.0))
    assert np.allclose(after.velocities, -head_on_state.velocities)


def test_step_to_next_event_none_when_receding(head_on_state):
    receding = head_on_state.with_velocities(-head_on_state.velocities)
    state, event = step_to_next_event(receding)
    assert event is None
    assert state is receding


def test_chained_contact_is_simultaneous():
    state = SystemState.create(
        [[-3.0, 0.0], [0.0, 0.0], [3.0, 0.0]],
        [[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
    )
    with pytest.raises(SimultaneousCollision) as info:
        simulate(state)
    assert info.value.time == pytest.approx(1.0)
    assert set(info.value.pairs) == {(0, 1), (1, 2)}


def test_two_balls_collide_once(head_on_state):
    traj = simulate(head_on_state)
    assert traj.collision_count == 1
    assert traj.terminal
    assert traj.end == math.inf
    assert traj.delta_observed == math.inf


def test_line_of_four_has_six_collisions(line4_trajectory):
    assert line4_trajectory.collision_count == 6
    assert line4_trajectory.terminal
    assert all(k - j == 1 for j, k in line4_trajectory.pair_sequence)
    assert set(line4_trajectory.pair_sequence) == {(0, 1), (1, 2), (2, 3)}
    assert line4_trajectory.delta_observed > 0.0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_simulation_conserves_energy_momentum_and_centre(random_trajectory, seed):
    traj = random_trajectory(n=2 + seed % 5, d=2 + seed % 2, seed=seed)
    checked = list(traj.states) + [traj.evaluate((traj.last_event_time or 0.0) + 5.0)]
    for state in checked:
        assert state.energy == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(state.momentum, 0.0, atol=1e-9)
        assert np.allclose(state.center_sum, 0.0, atol=1e-9)
        assert state.min_gap() >= -1e-9


def test_simulation_is_deterministic(line4_state):
    first = simulate(line4_state)
    second = simulate(line4_state)
    assert first.event_times == second.event_times
    assert first.pair_sequence == second.pair_sequence


def test_event_budget_carries_partial_trajectory(line4_state):
    with pytest.raises(EventBudgetExceeded) as info:
        simulate(line4_state, max_events=2)
    assert info.value.max_events == 2
    assert info.value.partial.collision_count == 2
    assert not info.value.partial.terminal


def test_horizon_stops_early(line4_trajectory, line4_state):
    horizon = line4_trajectory.event_times[2]
    traj = simulate(line4_state, horizon=horizon)
    assert traj.collision_count == 3
    assert not traj.terminal
    assert traj.end == horizon


def test_evaluate_sides_and_interpolation(line4_trajectory, line4_state):
    traj = line4_trajectory
    t_first = traj.event_times[0]
    early = traj.evaluate(0.5 * t_first)
    assert np.allclose(early.positions, line4_state.positions + 0.5 * t_first * line4_state.velocities)

    ev = traj.events[0]
    j, k = ev.pair
    right = traj.velocities(ev.time, Side.RIGHT)
    left = traj.velocities(ev.time, Side.LEFT)
    assert np.allclose(right[[j, k]], np.array(ev.post_velocities))
    assert np.allclose(left[[j, k]], np.array(ev.pre_velocities))

    a, b = traj.event_times[1], traj.event_times[2]
    mid = 0.5 * (a + b)
    from_left = traj.evaluate(a).advanced(mid - a).positions
    from_right = traj.evaluate(b, Side.LEFT).advanced(mid - b).positions
    assert np.allclose(traj.positions(mid), from_left, atol=1e-12)
    assert np.allclose(traj.positions(mid), from_right, atol=1e-12)


def test_evaluate_outside_span(line4_trajectory):
    with pytest.raises(OutOfSpan):
        line4_trajectory.evaluate(-1.0)


def test_from_events_replays_the_log(line4_trajectory):
    replay = Trajectory.from_events(line4_trajectory.initial, line4_trajectory.events, terminal=True)
    for original, rebuilt in zip(line4_trajectory.states, replay.states):
        assert np.allclose(original.positions, rebuilt.positions)
        assert np.allclose(original.velocities, rebuilt.velocities)


def test_extend_backward_recovers_earlier_collisions(line4_trajectory):
    a, b = line4_trajectory.event_times[1], line4_trajectory.event_times[2]
    middle = line4_trajectory.evaluate(0.5 * (a + b))
    forward = simulate(middle)
    assert forward.collision_count == 4

    full = extend_backward(forward)
    assert full.backward_complete
    assert full.start == -math.inf
    assert full.collision_count == 6
    assert np.allclose(full.event_times, line4_trajectory.event_times, atol=1e-9)
    assert full.pair_sequence == line4_trajectory.pair_sequence
    before = full.evaluate(-10.0)
    expected = line4_trajectory.initial.advanced(-10.0)
    assert np.allclose(before.positions, expected.positions, atol=1e-9)


def test_full_evolution_is_two_sided(head_on_state):
    traj = full_evolution(head_on_state)
    assert traj.collision_count == 1
    assert traj.contains(-1e6) and traj.contains(1e6)


def _random_state(seed):
    return random_admissible(4, 2 + seed % 2, seed=seed).state


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_reversed_final_state_replays_events_backwards(seed):
    forward = full_evolution(_random_state(seed))
    after = forward.evaluate((forward.last_event_time or 0.0) + 1.0)
    replay = simulate(time_reverse(after))
    assert replay.terminal
    assert replay.pair_sequence == forward.pair_sequence[::-1]
    mirrored = [2.0 * after.time - t for t in reversed(forward.event_times)]
    assert np.allclose(replay.event_times, mirrored, atol=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_reversed_full_evolution_mirrors_event_times(seed):
    state = _random_state(seed)
    forward = full_evolution(state)
    backward = full_evolution(time_reverse(state))
    assert backward.pair_sequence == forward.pair_sequence[::-1]
    assert np.allclose(backward.event_times, [-t for t in reversed(forward.event_times)], atol=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_galilean_boost_keeps_collision_sequence(seed):
    state = _random_state(seed)
    boost = np.random.default_rng(seed).standard_normal(state.dimension)
    boosted = SystemState(state.time, state.positions, state.velocities + boost)
    plain, moved = full_evolution(state), full_evolution(boosted)
    assert moved.pair_sequence == plain.pair_sequence
    assert np.allclose(moved.event_times, plain.event_times, atol=1e-9)
    if plain.events:
        t = plain.last_event_time + 1.0
        assert np.allclose(moved.positions(t), plain.positions(t) + t * boost, atol=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_terminal_final_state_has_no_further_events(random_trajectory, seed):
    traj = random_trajectory(n=5, seed=seed)
    assert traj.terminal
    assert simulate(traj.final_state).collision_count == 0


@pytest.mark.parametrize("seed", range(10))
def test_phase_jump_at_every_collision_is_positive(random_trajectory, seed):
    traj = random_trajectory(n=5, d=3, seed=seed)
    for t in traj.event_times:
        x = traj.positions(t).reshape(-1)
        jump = traj.velocities(t, Side.RIGHT) - traj.velocities(t, Side.LEFT)
        assert float(x @ jump.reshape(-1)) > 1e-9
