import logging
import math

import numpy as np
import pytest

from hardball.dynamics import (
    SystemState,
    angle_between,
    approach_check,
    exchange_normal_components,
    is_normalized,
    normalize_frame,
    resolve_collision,
    time_reverse,
)
from hardball.errors import InvalidState, NotApproaching, NotInContact, UnsupportedGeometry, ZeroEnergy, ZeroVector


def _pair(v1, v2, x1=(-1.0, 0.0), x2=(1.0, 0.0)):
    return SystemState.create([x1, x2], [v1, v2])


def test_normalize_frame_boosts_and_rescales():
    state = _pair((2.0, 0.0), (0.0, 0.0), x1=(-2.0, 0.0), x2=(2.0, 0.0))
    out = normalize_frame(state)
    h = 1.0 / math.sqrt(2.0)
    assert np.allclose(out.velocities, [[h, 0.0], [-h, 0.0]])
    assert np.allclose(out.positions, [[-2.0, 0.0], [2.0, 0.0]])
    assert is_normalized(out)


def test_normalize_frame_is_a_fixed_point(head_on_state):
    out = normalize_frame(head_on_state)
    assert np.allclose(out.positions, head_on_state.positions)
    assert np.allclose(out.velocities, head_on_state.velocities)


def test_normalize_frame_rejects_equal_velocities():
    with pytest.raises(ZeroEnergy):
        normalize_frame(_pair((1.0, 1.0), (1.0, 1.0)))


@pytest.mark.parametrize(
    "v1, v2, expected",
    [
        ((1.0, 0.0), (-1.0, 0.0), True),
        ((0.0, 1.0), (0.0, -1.0), False),
        ((-1.0, 0.0), (1.0, 0.0), False),
    ],
)
def test_approach_check(v1, v2, expected):
    assert approach_check(_pair(v1, v2), 0, 1) is expected


def test_approach_check_requires_contact():
    with pytest.raises(NotInContact):
        approach_check(_pair((1.0, 0.0), (-1.0, 0.0), x2=(3.0, 0.0)), 0, 1)


def test_resolve_head_on_exchanges_velocities():
    v1, v2 = resolve_collision(_pair((1.0, 0.0), (-1.0, 0.0)), 0, 1)
    assert np.allclose(v1, [-1.0, 0.0])
    assert np.allclose(v2, [1.0, 0.0])


def test_resolve_oblique_keeps_tangential_part():
    h = 1.0 / math.sqrt(2.0)
    v1, v2 = resolve_collision(_pair((h, h), (0.0, 0.0)), 0, 1)
    assert np.allclose(v1, [0.0, h])
    assert np.allclose(v2, [h, 0.0])


def test_resolve_conserves_energy_and_momentum():
    rng = np.random.default_rng(7)
    for _ in range(50):
        pre1, pre2 = rng.standard_normal(3), rng.standard_normal(3)
        pre1[0] = abs(pre1[0]) + 0.1
        pre2[0] = -abs(pre2[0])
        state = SystemState.create([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], [pre1, pre2])
        post1, post2 = resolve_collision(state, 0, 1)
        assert post1 @ post1 + post2 @ post2 == pytest.approx(pre1 @ pre1 + pre2 @ pre2)
        assert np.allclose(post1 + post2, pre1 + pre2)


def test_resolve_rejects_receding_pair(caplog):
    with caplog.at_level(logging.DEBUG, logger="hardball.dynamics.collision"):
        with pytest.raises(NotApproaching):
            resolve_collision(_pair((-1.0, 0.0), (1.0, 0.0)), 0, 1)
    assert "collision_rejected" in caplog.messages


def test_time_reverse_negates_velocities():
    out = time_reverse(_pair((1.0, 0.0), (0.0, 0.0)))
    assert np.allclose(out.velocities[0], [-1.0, 0.0])


def test_angle_between():
    assert angle_between(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(math.pi / 2)
    assert angle_between(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == pytest.approx(0.0)
    assert angle_between(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == pytest.approx(math.pi)
    with pytest.raises(ZeroVector):
        angle_between(np.zeros(2), np.array([1.0, 0.0]))


def test_state_invariants():
    with pytest.raises(InvalidState):
        SystemState.create([[0.0, 0.0]], [[1.0, 0.0]])
    with pytest.raises(InvalidState):
        SystemState.create([[0.0], [3.0]], [[1.0], [0.0]])
    with pytest.raises(InvalidState):
        SystemState.create([[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]).validate(1e-9)
    with pytest.raises(UnsupportedGeometry):
        SystemState.create([[0.0, 0.0], [3.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]], radii=[1.0, 2.0])


def test_state_arrays_are_read_only(head_on_state):
    with pytest.raises(ValueError):
        head_on_state.positions[0, 0] = 5.0


def test_collision_law_is_an_involution():
    rng = np.random.default_rng(11)
    for _ in range(50):
        pre1, pre2 = rng.standard_normal(3), rng.standard_normal(3)
        pre1[0] = abs(pre1[0]) + 0.1
        pre2[0] = -abs(pre2[0])
        state = SystemState.create([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], [pre1, pre2])
        post1, post2 = resolve_collision(state, 0, 1)
        again1, again2 = exchange_normal_components(post1, post2, np.array([-1.0, 0.0, 0.0]))
        assert np.allclose(again1, pre1)
        assert np.allclose(again2, pre2)
        # the reversed outgoing pair collides back into the reversed incoming one
        back1, back2 = resolve_collision(time_reverse(state.with_velocities(np.array([post1, post2]))), 0, 1)
        assert np.allclose(back1, -pre1)
        assert np.allclose(back2, -pre2)


def test_normalize_frame_is_idempotent():
    rng = np.random.default_rng(5)
    for _ in range(20):
        centers = 10.0 * rng.standard_normal((4, 3))
        state = SystemState(2.5, centers, 3.0 * rng.standard_normal((4, 3)) + 1.0)
        once = normalize_frame(state)
        twice = normalize_frame(once)
        assert twice.time == once.time
        assert np.allclose(twice.positions, once.positions, atol=1e-12)
        assert np.allclose(twice.velocities, once.velocities, atol=1e-12)
