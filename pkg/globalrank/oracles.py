"""Exact centrality values and competition ranks.

These are the ground truth every estimator is measured against. Closeness
for all nodes costs one BFS per node, O(n * m) in total, which is exactly the
cost the estimators exist to avoid.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .exceptions import DisconnectedGraphError, DomainError, ParameterError
from .graph import Graph, largest_connected_component

logger = logging.getLogger(__name__)

METRICS = ("degree", "closeness")
ALL_CLOSENESS_CHUNK = 64


class BfsCounter:
    """Counts BFS traversals; safe to increment from concurrent threads."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    def increment(self, amount: int = 1) -> None:
        with self._lock:
            self._value += amount

    @property
    def value(self) -> int:
        with self._lock:
            return self._value

    def reset(self) -> None:
        with self._lock:
            self._value = 0


BFS_COUNTER = BfsCounter()


@dataclass(frozen=True)
class CentralityVector:
    """Centrality value of every node under one metric."""

    metric: str
    values: np.ndarray

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ParameterError(f"Unknown centrality metric: {self.metric}")

    def __len__(self) -> int:
        return len(self.values)

    def ranks(self) -> np.ndarray:
        """Competition rank of every node: 1 + number of strictly greater values."""
        ordered = np.sort(self.values)
        greater = len(ordered) - np.searchsorted(ordered, self.values, side='right')
        return greater + 1


@dataclass(frozen=True)
class ExactRank:
    node: int
    rank: int
    metric: str


def bfs_distances(graph: Graph, source: int) -> np.ndarray:
    """
    Unit-weight shortest-path distances from ``source`` (inf if unreachable).

    Every call is one BFS traversal and is recorded in ``BFS_COUNTER``.
    """
    graph.degree(source)
    distances = shortest_path(
        graph.csr, method='D', directed=False, unweighted=True, indices=source
    )
    BFS_COUNTER.increment()
    return distances


def closeness_from_distances(graph: Graph, source: int, distances: np.ndarray) -> float:
    unreachable = np.isinf(distances)
    if unreachable.any():
        missing = int(np.count_nonzero(unreachable))
        example = graph.label(int(np.flatnonzero(unreachable)[0]))
        raise DisconnectedGraphError(
            f"Node {graph.label(source)} reaches {graph.n - missing} of {graph.n} nodes "
            f"(node {example} is unreachable); restrict the graph to its largest "
            f"connected component",
            component_size=graph.n - missing,
            unreachable=missing,
        )
    return (graph.n - 1) / float(distances.sum())


def degree_centrality(graph: Graph, u: int) -> float:
    """
    Degree centrality d_u / (n - 1).

    Raises:
        DomainError: If the graph has fewer than two nodes
    """
    if graph.n < 2:
        raise DomainError("Degree centrality needs at least two nodes")
    return graph.degree(u) / (graph.n - 1)


def degree_vector(graph: Graph) -> CentralityVector:
    """Degree centrality of every node."""
    if graph.n < 2:
        raise DomainError("Degree centrality needs at least two nodes")
    return CentralityVector("degree", graph.degrees / (graph.n - 1))


def closeness_centrality(graph: Graph, u: int) -> float:
    """
    Closeness centrality (n - 1) / sum of distances, from one BFS.

    Raises:
        DisconnectedGraphError: If some node is unreachable from ``u``
    """
    if graph.n < 2:
        raise DomainError("Closeness centrality needs at least two nodes")
    return closeness_from_distances(graph, u, bfs_distances(graph, u))


def all_closeness(graph: Graph, workers: int = 1) -> CentralityVector:
    """
    Closeness centrality of every node (n BFS traversals).

    Sources are processed in chunks; with ``workers > 1`` chunks run on a
    thread pool. Results do not depend on the execution order.

    Raises:
        DisconnectedGraphError: If the graph is not connected
    """
    if graph.n < 2:
        raise DomainError("Closeness centrality needs at least two nodes")

    starts = list(range(0, graph.n, ALL_CLOSENESS_CHUNK))

    def run_chunk(start: int) -> np.ndarray:
        sources = np.arange(start, min(start + ALL_CLOSENESS_CHUNK, graph.n))
        distances = shortest_path(
            graph.csr, method='D', directed=False, unweighted=True, indices=sources
        )
        BFS_COUNTER.increment(len(sources))
        return np.array([
            closeness_from_distances(graph, int(s), row)
            for s, row in zip(sources, distances)
        ])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_chunk, starts))
    else:
        chunks = [run_chunk(start) for start in starts]

    logger.debug("Computed closeness for %d nodes", graph.n)
    return CentralityVector("closeness", np.concatenate(chunks))


def exact_rank(values: CentralityVector, u: int) -> ExactRank:
    """Competition rank of ``u``: 1 + number of nodes with strictly greater value."""
    greater = int(np.count_nonzero(values.values > values.values[u]))
    return ExactRank(node=u, rank=greater + 1, metric=values.metric)


def degree_rank(graph: Graph, u: int) -> ExactRank:
    """Exact degree rank of ``u``."""
    graph.degree(u)
    return exact_rank(degree_vector(graph), u)


def closeness_rank(graph: Graph, u: int, workers: int = 1) -> ExactRank:
    """
    Exact closeness rank of ``u`` within the largest connected component.

    Raises:
        DisconnectedGraphError: If ``u`` lies outside the largest component
    """
    component, mapping = largest_connected_component(graph)
    local = lcc_node(graph, component, mapping, u)
    rank = exact_rank(all_closeness(component, workers=workers), local)
    return ExactRank(node=u, rank=rank.rank, metric="closeness")


def lcc_node(graph: Graph, component: Graph, mapping: np.ndarray, u: int) -> int:
    """
    Id of ``u`` inside the largest component.

    Raises:
        DisconnectedGraphError: If ``u`` is not part of it
    """
    graph.degree(u)
    local = int(mapping[u])
    if local < 0:
        raise DisconnectedGraphError(
            f"Node {graph.label(u)} is outside the largest connected component "
            f"({component.n} of {graph.n} nodes); closeness ranks are defined there only",
            component_size=component.n,
        )
    return local


def exact_ranks(graph: Graph, metric: str, workers: Optional[int] = None) -> np.ndarray:
    """Exact ranks of every node of ``graph`` under ``metric``."""
    if metric == "degree":
        return degree_vector(graph).ranks()
    if metric == "closeness":
        return all_closeness(graph, workers=workers or 1).ranks()
    raise ParameterError(f"Unknown centrality metric: {metric}")
