"""Closed-form bounds, scenario generators and the collision-count search."""

from .bounds import (
    TABLE_COLUMNS,
    BoundReport,
    CoveringSchedule,
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
from .generators import Scenario, head_on, line_of_balls, random_admissible
from .search import LinearSchedule, SearchResult, perturb, search_max_collisions

__all__ = [
    "TABLE_COLUMNS",
    "BoundReport",
    "CoveringSchedule",
    "LinearSchedule",
    "Scenario",
    "SearchResult",
    "bfk_mass_bound",
    "bfk_radius_bound",
    "bounds_table",
    "collision_budget",
    "covering_schedule",
    "head_on",
    "line_of_balls",
    "lower_bound_cubic",
    "nf_recursion_holds",
    "partition_times",
    "partition_times_consistent",
    "perturb",
    "random_admissible",
    "search_max_collisions",
    "stopping_radius",
    "thm_nc_bound",
    "thm_nf_bound",
    "upcrossing_bound",
    "upcrossing_recursion_holds",
]
