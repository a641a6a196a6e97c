"""Exact top-K random walk with restart search."""

from ._core import (
    Graph,
    ProximityIndex,
    QueryResult,
    __version__,
    build_index,
    erdos_renyi,
    iterative_rwr,
    load_edge_list,
    load_index,
    parse_edge_list,
    planted_partition,
)

__all__ = [
    "Graph",
    "ProximityIndex",
    "QueryResult",
    "__version__",
    "build_index",
    "erdos_renyi",
    "iterative_rwr",
    "load_edge_list",
    "load_index",
    "parse_edge_list",
    "planted_partition",
]
