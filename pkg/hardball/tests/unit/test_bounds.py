import math

import pytest

from hardball.errors import InvalidInput
from hardball.scenarios import (
    TABLE_COLUMNS,
    bfk_mass_bound,
    bfk_radius_bound,
    bounds_table,
    collision_budget,
    covering_schedule,
    lower_bound_cubic,
    nf_recursion_holds,
    partition_times,
    partition_times_consistent,
    stopping_radius,
    thm_nc_bound,
    thm_nf_bound,
    upcrossing_bound,
    upcrossing_recursion_holds,
)


def test_bfk_radius_bound_two_balls():
    report = bfk_radius_bound(2)
    assert report.exact_value == 8192**2
    assert report.value == pytest.approx(6.71e7, rel=1e-3)
    assert report.log10_value == pytest.approx(math.log10(67108864))


def test_bfk_radius_bound_paths_agree():
    report = bfk_radius_bound(3)
    assert report.log10_value == pytest.approx(report.exact_log10, rel=1e-10)
    assert report.log10_value == pytest.approx(9 * math.log10(32 * 3**1.5))


def test_bfk_bounds_are_monotone():
    for n in range(2, 12):
        assert bfk_radius_bound(n).log10_value < bfk_radius_bound(n + 1).log10_value
        assert bfk_mass_bound(n).log10_value < bfk_mass_bound(n + 1).log10_value


def test_bfk_mass_bound_two_balls():
    report = bfk_mass_bound(2)
    assert report.exact_value == 1600**32
    assert report.log10_value == pytest.approx(32 * math.log10(1600))


def test_bfk_rejects_small_ratios():
    with pytest.raises(InvalidInput):
        bfk_radius_bound(3, radius_ratio=0.5)


@pytest.mark.parametrize("n, expected", [(3, 1.0), (6, 8.0), (30, 1000.0)])
def test_lower_bound_cubic(n, expected):
    assert lower_bound_cubic(n) == pytest.approx(expected)


def test_lower_bound_cubic_needs_three_balls():
    with pytest.raises(InvalidInput):
        lower_bound_cubic(2)


def test_thm_nf_bound_three_balls():
    expected = 3 * math.log10(73) + 1.5 * math.log10(6) + 3 * math.log10(math.log(15))
    report = thm_nf_bound(3, 1.0)
    assert report.log10_value == pytest.approx(expected)
    assert report.log10_value == pytest.approx(8.0552, abs=1e-3)
    assert report.exact_log10 == pytest.approx(expected)


def test_thm_nf_bound_scales_with_inverse_delta():
    assert thm_nf_bound(5, 0.25).log10_value - thm_nf_bound(5, 0.5).log10_value == pytest.approx(math.log10(2))


def test_thm_nf_bound_accepts_tiny_delta_in_log_form():
    report = thm_nf_bound(4, log10_delta=-400.0)
    assert report.log10_value == pytest.approx(thm_nf_bound(4, 1.0).log10_value + 400.0)
    assert report.value == math.inf


@pytest.mark.parametrize("delta", [1.0, 0.1])
def test_nf_recursion_holds(delta):
    assert all(nf_recursion_holds(n, delta) for n in range(3, 51))


def test_thm_nf_bound_rejects_bad_delta():
    with pytest.raises(InvalidInput):
        thm_nf_bound(4, 1.5)
    with pytest.raises(InvalidInput):
        thm_nf_bound(4, 0.0)


def test_thm_nc_bound():
    assert thm_nc_bound(4, 6.0).extras["min_valid_n"] == 3
    assert thm_nc_bound(4, 1.0).log10_value == pytest.approx(14 * math.log10(4))


def test_thm_nc_bound_is_consistent_past_its_threshold():
    for n in range(3, 9):
        assert thm_nc_bound(n, 6.0).extras["consistent"] is True


def test_partition_times():
    T, T_star = partition_times(2, 1.0)
    assert T == pytest.approx(18 * math.sqrt(2))
    assert T_star == pytest.approx(800.0)
    assert all(partition_times_consistent(n) for n in range(2, 101))
    with pytest.raises(InvalidInput):
        partition_times(3, 0.5)


def test_stopping_radius():
    assert stopping_radius(2, 2.0) == pytest.approx(1602.0)


def test_upcrossing_bound_subtracts_offset():
    report = upcrossing_bound(3, 0.5)
    phi = 10.0 ** report.extras["log10_phi_rho"]
    assert report.value == pytest.approx(phi - 8.0)


@pytest.mark.parametrize("rho", [0.2, 1.0])
def test_upcrossing_recursion_holds(rho):
    assert all(upcrossing_recursion_holds(n, rho) for n in range(3, 31))


@pytest.mark.parametrize("n", [3, 5, 10])
def test_covering_schedule_fits_bound(n):
    schedule = covering_schedule(n, 2.0)
    assert schedule.times[0] == 0.0
    assert schedule.times[-1] >= 18 * math.sqrt(n) * (n - 1) * 2.0
    assert schedule.within_bound


def test_collision_budget():
    assert collision_budget(2, math.inf) == 0.0
    assert collision_budget(4, 0.0) == math.inf
    assert collision_budget(4, 5.0) == pytest.approx(thm_nf_bound(4, 1.0).log10_value)
    assert collision_budget(4, 0.5) == pytest.approx(thm_nf_bound(4, 0.5).log10_value)


def test_bounds_table():
    table = bounds_table(range(3, 11), 0.5, 0.2)
    assert list(table.columns) == TABLE_COLUMNS
    assert list(table["n"]) == list(range(3, 11))
    assert table["log10_phi_delta"].is_monotonic_increasing
    assert table.loc[0, "cubic_lower"] == pytest.approx(1.0)


@pytest.mark.parametrize("n", range(3, 51))
def test_log_space_agrees_with_exact_integers(n):
    reports = [bfk_radius_bound(n), bfk_mass_bound(n), thm_nf_bound(n, 0.5), upcrossing_bound(n, 0.2)]
    for report in reports:
        assert report.exact_log10 is not None, report.formula
        assert report.log10_value == pytest.approx(report.exact_log10, rel=1e-10), report.formula
        if report.exact_value is not None:
            assert math.log10(report.exact_value) == pytest.approx(report.log10_value, rel=1e-10)
