"""
globalrank

Estimate the global degree or closeness rank of a single node in a large
undirected network without computing the centrality of every node.
"""

__version__ = "0.1.0"

from .estimator import RankEstimator
from .exceptions import (
    GlobalRankException,
    ParseError,
    ParameterError,
    ConfigurationError,
    NodeNotFoundError,
    DataError,
    DisconnectedGraphError,
    DegenerateDistributionError,
    DomainError,
    DatasetError,
    DatasetNotFoundError,
)
from .graph import (
    Graph,
    generate_ba,
    generate_er,
    load_edge_list,
    load_edge_list_bytes,
    write_edge_list,
)
from .params import GroundTruthParameters, ProvidedParameters

__all__ = [
    "RankEstimator",
    "Graph",
    "load_edge_list",
    "load_edge_list_bytes",
    "write_edge_list",
    "generate_ba",
    "generate_er",
    "GroundTruthParameters",
    "ProvidedParameters",
    "GlobalRankException",
    "ParseError",
    "ParameterError",
    "ConfigurationError",
    "NodeNotFoundError",
    "DataError",
    "DisconnectedGraphError",
    "DegenerateDistributionError",
    "DomainError",
    "DatasetError",
    "DatasetNotFoundError",
]
