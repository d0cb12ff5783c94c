"""Exact all-terminal reliability of multigraphs and sparse-graph structure analysis."""

from .errors import GraphFormatError, InvalidGraphError, RelGraphError, ResourceLimitError
from .graph import (
    Multigraph,
    edge_connectivity,
    edge_distance,
    girth,
    girth6_family,
    metrics,
    parse_graph,
    parse_graph6,
    parse_sparse6,
    to_graph6,
    to_sparse6,
)
from .reliability import (
    UnrelPoly,
    class_filtration,
    compare_near_one,
    compare_near_zero,
    unrel_bruteforce,
    unrel_exact,
    unreliability,
)

__version__ = "0.1.0"
