"""Main entry point for estimating the global rank of a node."""

import logging
from typing import Optional

from .exceptions import ParameterError
from .graph import Graph
from .oracles import ExactRank, closeness_rank, degree_rank
from .params import GroundTruthParameters, ParameterSource
from .estimators import (
    ClosenessEstimator,
    PowerLawEstimator,
    RankEstimate,
    SamplingEstimator,
)

logger = logging.getLogger(__name__)

DEGREE_METHODS = ("pl", "us", "mh", "rw")
CLOSENESS_METHODS = ("closeness-sigmoid",)
METHODS = DEGREE_METHODS + CLOSENESS_METHODS


def metric_of(method: str) -> str:
    """Centrality metric a method estimates ranks for."""
    if method in DEGREE_METHODS:
        return "degree"
    if method in CLOSENESS_METHODS:
        return "closeness"
    raise ParameterError(f"Unknown estimation method: {method}")


class ExactRanker:
    """Exact (brute-force) ranks bound to a RankEstimator."""

    def __init__(self, estimator):
        """Initialize with the owning estimator."""
        self.estimator = estimator

    def rank(self, u: int, metric: str) -> ExactRank:
        """
        Exact competition rank of ``u``.

        Args:
            u: Internal node id
            metric: "degree" or "closeness" (closeness on the largest component)
        """
        if metric == "degree":
            return degree_rank(self.estimator.graph, u)
        if metric == "closeness":
            return closeness_rank(self.estimator.graph, u)
        raise ParameterError(f"Unknown centrality metric: {metric}")


class RankEstimator:
    """Estimate centrality ranks of single nodes of one graph."""

    DEFAULT_SAMPLE_FRAC = 0.01
    DEFAULT_BURN_IN = 100
    DEFAULT_SLOPE = 13.0

    def __init__(
        self,
        graph: Graph,
        params: Optional[ParameterSource] = None,
        sample_frac: float = DEFAULT_SAMPLE_FRAC,
        burn_in: int = DEFAULT_BURN_IN,
        slope: float = DEFAULT_SLOPE,
        seed: Optional[int] = None,
        debug: bool = False,
    ):
        """
        Initialize the estimator.

        Args:
            graph: Graph the queried nodes belong to
            params: Source of n, d_min, d_max, d_avg (default: read from graph)
            sample_frac: Sample size as a fraction of n (default: 0.01)
            burn_in: Discarded walk steps for MH/RW (default: 100)
            slope: Logistic slope for closeness estimation (default: 13)
            seed: RNG seed for sampling methods
            debug: Log every estimate at DEBUG level (default: False)
        """
        if not 0.0 < sample_frac <= 1.0:
            raise ParameterError(f"Sample fraction must lie in (0, 1], got {sample_frac}")
        if burn_in < 0:
            raise ParameterError(f"Burn-in must be non-negative, got {burn_in}")
        if slope <= 0:
            raise ParameterError(f"Slope must be positive, got {slope}")

        self.graph = graph
        self._params = params
        self.sample_frac = sample_frac
        self.burn_in = burn_in
        self.slope = slope
        self.seed = seed
        self.debug = debug

        self.exact = ExactRanker(self)
        self.powerlaw = PowerLawEstimator(self)
        self.sampling = SamplingEstimator(self)
        self.closeness = ClosenessEstimator(self)

    @property
    def params(self) -> ParameterSource:
        """Parameter source; ground truth from the graph unless one was given."""
        if self._params is None:
            self._params = GroundTruthParameters(self.graph)
        return self._params

    def estimate(self, u: int, method: str, seed: Optional[int] = None) -> RankEstimate:
        """
        Estimate the rank of node ``u`` with the named method.

        Args:
            u: Internal node id
            method: One of "pl", "us", "mh", "rw", "closeness-sigmoid"
            seed: Overrides the estimator's seed for sampling methods

        Raises:
            ParameterError: On an unknown method
        """
        if self.debug:
            logger.debug("Estimating rank of node %s with %s", self.graph.label(u), method)
        if method == "pl":
            return self.powerlaw.estimate(u)
        if method in SamplingEstimator.METHODS:
            return self.sampling.estimate(u, method, seed=seed)
        if method in CLOSENESS_METHODS:
            return self.closeness.estimate(u)
        raise ParameterError(f"Unknown estimation method: {method}")

    def estimate_label(self, label, method: str, seed: Optional[int] = None) -> RankEstimate:
        """Like :meth:`estimate`, addressing the node by its external label."""
        return self.estimate(self.graph.node_id(label), method, seed=seed)
