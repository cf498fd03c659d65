"""Contact graphs, upcrossings, partitions and dense clusters."""

from .contact import ContactGraph, contact_graph, is_rho_connected, level_crossings
from .dense import DenseCluster, dense_cluster_search
from .partition import (
    SEPARATION_DISTANCE,
    Partition,
    PartitionKind,
    cross_collisions_after,
    min_cross_distance,
    position_gap_partition,
    single_linkage,
    velocity_drift_after,
    velocity_gap_partition,
    velocity_gap_threshold,
    verify_separation,
)
from .unionfind import UnionFind
from .upcrossings import UpcrossingLedger, pair_stopping_times, upcrossings

__all__ = [
    "SEPARATION_DISTANCE",
    "ContactGraph",
    "DenseCluster",
    "Partition",
    "PartitionKind",
    "UnionFind",
    "UpcrossingLedger",
    "contact_graph",
    "cross_collisions_after",
    "dense_cluster_search",
    "is_rho_connected",
    "level_crossings",
    "min_cross_distance",
    "pair_stopping_times",
    "position_gap_partition",
    "single_linkage",
    "upcrossings",
    "velocity_drift_after",
    "velocity_gap_partition",
    "velocity_gap_threshold",
    "verify_separation",
]
