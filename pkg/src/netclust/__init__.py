"""Community detection by modularity maximization with a discrete Group Search Optimizer."""

from netclust.graph import Graph, GraphParseError, degree, load_graph, parse_edge_list, parse_gml
from netclust.modularity import (
    ModulesMatrix,
    canonicalize,
    community_count,
    delta_modularity,
    modularity,
    modules_matrix,
)
from netclust.gso import GsoParams, RunResult, optimize
from netclust.oracle import brute_force_max_modularity, enumerate_partitions, greedy_baseline

__all__ = [
    "Graph",
    "GraphParseError",
    "GsoParams",
    "ModulesMatrix",
    "RunResult",
    "brute_force_max_modularity",
    "canonicalize",
    "community_count",
    "degree",
    "delta_modularity",
    "enumerate_partitions",
    "greedy_baseline",
    "load_graph",
    "modularity",
    "modules_matrix",
    "optimize",
    "parse_edge_list",
    "parse_gml",
]

__version__ = "0.1.0"
