"""Capability-restricted views of a graph for sampling.

A crawler only sees what it can ask a node about: its degree, its
neighbors, or one random neighbor. :class:`LocalAccess` exposes exactly that.
:class:`GlobalAccess` adds the two capabilities a crawler does not have in
practice (a uniformly random node, and the network size), so code that
needs them has to ask for them explicitly. Every call is counted.
"""

import threading
from collections import Counter
from typing import Dict

import numpy as np

from .exceptions import DomainError
from .graph import Graph


class LocalAccess:
    """Degree and neighbor queries only."""

    CAPABILITIES = ("degree", "neighbors", "random_neighbor")

    def __init__(self, graph: Graph):
        self._graph = graph
        self._indptr = graph.indptr
        self._indices = graph.indices
        self._lock = threading.Lock()
        self._counts = Counter({name: 0 for name in self.CAPABILITIES})

    def _record(self, capability: str) -> None:
        with self._lock:
            self._counts[capability] += 1

    @property
    def counters(self) -> Dict[str, int]:
        """Number of calls made per capability."""
        with self._lock:
            return dict(self._counts)

    def degree(self, u: int) -> int:
        self._record("degree")
        return self._graph.degree(u)

    def neighbors(self, u: int) -> np.ndarray:
        self._record("neighbors")
        return self._graph.neighbors(u)

    def random_neighbor(self, u: int, rng) -> int:
        """
        A neighbor of ``u`` chosen uniformly at random.

        Raises:
            DomainError: If ``u`` has no neighbors
        """
        self._record("random_neighbor")
        start = self._indptr[u]
        degree = self._indptr[u + 1] - start
        if degree == 0:
            raise DomainError(f"Node {self._graph.label(u)} has no neighbors")
        return int(self._indices[start + int(rng.random() * degree)])


class GlobalAccess(LocalAccess):
    """Local queries plus uniform node sampling and the network size."""

    CAPABILITIES = LocalAccess.CAPABILITIES + ("random_node", "node_count")

    def random_node(self, rng) -> int:
        self._record("random_node")
        return int(rng.integers(self._graph.n))

    def node_count(self) -> int:
        self._record("node_count")
        return self._graph.n
