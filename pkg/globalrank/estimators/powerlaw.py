"""Degree rank estimation from power-law degree distribution parameters.

In a scale-free network the fraction of nodes with degree j follows
f(j) = c * j^(-gamma). With gamma and c derived from the minimum, maximum
and average degree, the expected number of nodes with a strictly larger
degree has a closed form, so one estimate costs O(1).
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import DegenerateDistributionError, DomainError, ParameterError
from ..graph import DegreeStats
from .result import RankEstimate, clamp_rank

logger = logging.getLogger(__name__)

METHOD = "pl"


def estimate_gamma(stats: DegreeStats) -> float:
    """
    Power-law exponent gamma ~ 2 + d_min / (d_avg - d_min).

    Raises:
        DegenerateDistributionError: If d_avg <= d_min (regular graph)
    """
    if stats.d_avg <= stats.d_min:
        raise DegenerateDistributionError(
            f"Average degree {stats.d_avg} does not exceed minimum degree {stats.d_min}; "
            f"the degree distribution is degenerate"
        )
    return 2.0 + stats.d_min / (stats.d_avg - stats.d_min)


def estimate_c(gamma: float, d_min: int, d_max: int) -> float:
    """
    Normalization constant c = (1 - gamma) / (d_max^(1-gamma) - d_min^(1-gamma)).

    Raises:
        DegenerateDistributionError: If d_max <= d_min
        DomainError: If gamma == 1 or d_min < 1
    """
    if d_max <= d_min:
        raise DegenerateDistributionError(
            f"Maximum degree {d_max} must exceed minimum degree {d_min}"
        )
    if gamma == 1.0:
        raise DomainError("Exponent gamma = 1 has no closed-form normalization")
    if d_min < 1:
        raise DomainError(f"Minimum degree must be at least 1, got {d_min}")
    e = 1.0 - gamma
    return e / (float(d_max) ** e - float(d_min) ** e)


@dataclass(frozen=True)
class PowerLawParams:
    """Parameters of f(j) = c * j^(-gamma) on [d_min, d_max] for n nodes."""

    gamma: float
    c: float
    d_min: int
    d_max: int
    n: int

    def __post_init__(self):
        if self.c <= 0:
            raise ParameterError(f"Normalization constant must be positive, got {self.c}")
        if self.n < 0:
            raise ParameterError(f"Network size must be non-negative, got {self.n}")

    @classmethod
    def from_stats(cls, stats: DegreeStats, n: int) -> "PowerLawParams":
        """Derive gamma and c from degree statistics."""
        gamma = estimate_gamma(stats)
        c = estimate_c(gamma, stats.d_min, stats.d_max)
        return cls(gamma=gamma, c=c, d_min=stats.d_min, d_max=stats.d_max, n=n)

    @classmethod
    def from_source(cls, source) -> "PowerLawParams":
        """Derive parameters from a ParameterSource."""
        return cls.from_stats(source.stats, source.n)

    def density(self, j: float) -> float:
        return self.c * float(j) ** (-self.gamma)


def expected_degree_count(params: PowerLawParams, j: int) -> float:
    """
    Expected number of nodes of degree j, n * c * j^(-gamma).

    This is a continuous approximation; near d_min it can exceed the true
    bin count.

    Raises:
        DomainError: If j lies outside [d_min, d_max]
    """
    if not params.d_min <= j <= params.d_max:
        raise DomainError(f"Degree {j} outside [{params.d_min}, {params.d_max}]")
    return params.n * params.density(j)


def _raw_rank(params: PowerLawParams, d_u):
    e = 1.0 - params.gamma
    top = float(params.d_max) ** e
    return params.n * (top - (d_u + 1.0) ** e) / (top - float(params.d_min) ** e) + 1.0


def estimate_degree_rank_pl(params: PowerLawParams, d_u: int, node: int = -1) -> RankEstimate:
    """
    Expected degree rank of a node of degree ``d_u``.

    ``d_u`` is clamped into [d_min, d_max]; the result is clamped into [1, n]
    and left real-valued.
    """
    if params.n < 1:
        raise ParameterError("Rank estimation needs a network of at least one node")
    d = min(max(d_u, params.d_min), params.d_max)
    value = clamp_rank(_raw_rank(params, d), params.n)
    return RankEstimate(node=node, value=value, method=METHOD)


def pl_rank_curve(params: PowerLawParams, degrees) -> np.ndarray:
    """Vectorized :func:`estimate_degree_rank_pl` over an array of degrees."""
    if params.n < 1:
        raise ParameterError("Rank estimation needs a network of at least one node")
    d = np.clip(np.asarray(degrees, dtype=float), params.d_min, params.d_max)
    return np.clip(_raw_rank(params, d), 1.0, float(params.n))


class PowerLawEstimator:
    """Power-law degree-rank estimation bound to a RankEstimator."""

    def __init__(self, estimator):
        """Initialize with the owning estimator."""
        self.estimator = estimator
        self._params = None

    @property
    def params(self) -> PowerLawParams:
        """Power-law parameters from the estimator's parameter source (cached)."""
        if self._params is None:
            self._params = PowerLawParams.from_source(self.estimator.params)
            if self.estimator.debug:
                logger.debug(
                    "PL parameters gamma=%.6f c=%.6f from %s",
                    self._params.gamma, self._params.c, self.estimator.params.describe(),
                )
        return self._params

    def estimate(self, u: int) -> RankEstimate:
        """
        Estimate the degree rank of node ``u``.

        Args:
            u: Internal node id

        Returns:
            Real-valued estimate in [1, n]
        """
        return estimate_degree_rank_pl(self.params, self.estimator.graph.degree(u), node=u)
