"""Closeness rank estimation with a logistic reverse-rank curve.

In social networks, reverse closeness rank plotted against closeness
follows a 4-parameter logistic curve

    reverse_rank(u) = n + (1 - n) / (1 + (C(u) / c_mid) ^ p)

The curve is pinned down from three closeness computations: the node of
maximum degree (close to the maximum closeness), the node farthest from it
(close to the minimum closeness), and the interested node. That is three
BFS traversals, O(m), instead of the O(n * m) needed for exact ranks.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..exceptions import DomainError, ParameterError
from ..graph import Graph, largest_connected_component
from ..oracles import closeness_from_distances, bfs_distances, closeness_centrality, lcc_node
from .result import RankEstimate, clamp_rank

logger = logging.getLogger(__name__)

METHOD = "closeness-sigmoid"
DEFAULT_SLOPE = 13.0


@dataclass(frozen=True)
class SigmoidParams:
    """Logistic curve parameters for one (connected) graph."""

    n: int
    c_mid: float
    p: float
    c_max_est: float
    c_min_est: float

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"Sigmoid model needs n >= 2, got {self.n}")
        if self.p <= 0:
            raise ParameterError(f"Slope must be positive, got {self.p}")
        if not self.c_min_est <= self.c_mid <= self.c_max_est:
            raise ParameterError(
                f"Need c_min_est <= c_mid <= c_max_est, got "
                f"{self.c_min_est} / {self.c_mid} / {self.c_max_est}"
            )


class Extremes(NamedTuple):
    c_max_est: float
    c_min_est: float
    farthest_node: int
    central_node: int


def find_central_candidate(graph: Graph) -> int:
    """Node of maximum degree, smallest id on ties."""
    if graph.n < 1:
        raise ParameterError("Empty graph has no central node")
    return int(np.argmax(graph.degrees))


def estimate_extremes(graph: Graph) -> Extremes:
    """
    Estimate maximum and minimum closeness with two BFS traversals.

    BFS #1 from the central candidate gives c_max_est and the farthest node
    (smallest id on ties); BFS #2 from that node gives c_min_est.

    Raises:
        DisconnectedGraphError: If the graph is not connected
    """
    if graph.n < 2:
        raise DomainError("Closeness centrality needs at least two nodes")
    central = find_central_candidate(graph)
    from_central = bfs_distances(graph, central)
    c_max = closeness_from_distances(graph, central, from_central)
    farthest = int(np.argmax(from_central))
    c_min = closeness_from_distances(graph, farthest, bfs_distances(graph, farthest))
    return Extremes(c_max_est=c_max, c_min_est=c_min, farthest_node=farthest, central_node=central)


def estimate_c_mid(c_max_est: float, c_min_est: float) -> float:
    """Closeness of the middle-ranked node, taken as the midpoint of the extremes."""
    if c_min_est > c_max_est:
        raise ParameterError(f"c_min_est {c_min_est} exceeds c_max_est {c_max_est}")
    return (c_max_est + c_min_est) / 2.0


def reverse_rank(c_u: float, params: SigmoidParams) -> float:
    """
    Logistic reverse rank n + (1 - n) / (1 + (c_u / c_mid)^p).

    Raises:
        DomainError: If c_u <= 0
    """
    if c_u <= 0:
        raise DomainError(f"Closeness must be positive, got {c_u}")
    try:
        growth = (c_u / params.c_mid) ** params.p
    except OverflowError:
        return float(params.n)
    return params.n + (1.0 - params.n) / (1.0 + growth)


def actual_rank_from_reverse(rev: float, n: int) -> float:
    """Actual rank n - rev + 1, clamped into [1, n]."""
    return clamp_rank(n - rev + 1.0, n)


@dataclass(frozen=True)
class ClosenessModel:
    """
    Sigmoid parameters of one graph, built once and shared by many queries.

    ``component`` is the largest connected component of ``graph`` and
    ``mapping`` sends ``graph`` ids to component ids (-1 outside).
    """

    graph: Graph
    component: Graph
    mapping: np.ndarray
    extremes: Extremes
    params: SigmoidParams

    @classmethod
    def build(cls, graph: Graph, slope: float = DEFAULT_SLOPE) -> "ClosenessModel":
        """Fit the model with two BFS traversals on the largest component."""
        component, mapping = largest_connected_component(graph)
        extremes = estimate_extremes(component)
        # the max-degree node is not guaranteed to beat its farthest node
        high = max(extremes.c_max_est, extremes.c_min_est)
        low = min(extremes.c_max_est, extremes.c_min_est)
        params = SigmoidParams(
            n=component.n,
            c_mid=estimate_c_mid(high, low),
            p=slope,
            c_max_est=high,
            c_min_est=low,
        )
        logger.debug(
            "Sigmoid model n=%d c_max=%.6f c_min=%.6f c_mid=%.6f p=%g",
            params.n, high, low, params.c_mid, slope,
        )
        return cls(graph=graph, component=component, mapping=mapping,
                   extremes=extremes, params=params)

    def rank_for_closeness(self, c_u: float) -> float:
        """Estimated actual rank of a node with closeness ``c_u`` (no BFS)."""
        return actual_rank_from_reverse(reverse_rank(c_u, self.params), self.params.n)

    def estimate(self, u: int) -> RankEstimate:
        """
        Estimated closeness rank of ``u`` (one BFS).

        Raises:
            DisconnectedGraphError: If ``u`` is outside the largest component
        """
        local = lcc_node(self.graph, self.component, self.mapping, u)
        c_u = closeness_centrality(self.component, local)
        return RankEstimate(node=u, value=self.rank_for_closeness(c_u), method=METHOD)


def estimate_closeness_rank(graph: Graph, u: int, p: float = DEFAULT_SLOPE) -> RankEstimate:
    """
    Estimated closeness rank of ``u`` with exactly three BFS traversals.

    Raises:
        DisconnectedGraphError: If ``u`` is outside the largest component
    """
    model = ClosenessModel.build(graph, slope=p)
    return model.estimate(u)


class ClosenessEstimator:
    """Closeness-rank estimation bound to a RankEstimator."""

    def __init__(self, estimator):
        """Initialize with the owning estimator."""
        self.estimator = estimator
        self._model = None

    @property
    def model(self) -> ClosenessModel:
        """Sigmoid model of the estimator's graph (built on first use)."""
        if self._model is None:
            self._model = ClosenessModel.build(self.estimator.graph, slope=self.estimator.slope)
        return self._model

    def estimate(self, u: int) -> RankEstimate:
        """
        Estimate the closeness rank of node ``u``.

        The first call costs three BFS traversals, later calls one each.
        """
        result = self.model.estimate(u)
        if self.estimator.debug:
            logger.debug("closeness-sigmoid estimate for node %d: %.6f", u, result.value)
        return result
