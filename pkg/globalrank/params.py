"""Sources for the network parameters (n, d_min, d_max, d_avg).

Rank estimators that extrapolate to the whole network need its size and
degree statistics. They are either read from a graph held in memory or
supplied by the caller, e.g. from an external size/average-degree estimator.
"""

from typing import Protocol

from .exceptions import ParameterError
from .graph import DegreeStats, Graph, degree_stats


class ParameterSource(Protocol):
    """Anything that can report network size and degree statistics."""

    @property
    def n(self) -> int:
        ...

    @property
    def stats(self) -> DegreeStats:
        ...

    def describe(self) -> str:
        ...


class GroundTruthParameters:
    """Parameters read exactly from a graph."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self._stats = degree_stats(graph)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def stats(self) -> DegreeStats:
        return self._stats

    def describe(self) -> str:
        s = self._stats
        return f"ground-truth n={self.n} d_min={s.d_min} d_max={s.d_max} d_avg={s.d_avg:.6f}"


class ProvidedParameters:
    """Parameters supplied by the caller."""

    def __init__(self, n: int, d_min: int, d_max: int, d_avg: float):
        """
        Args:
            n: Network size
            d_min: Minimum degree
            d_max: Maximum degree
            d_avg: Average degree

        Raises:
            ParameterError: Unless n >= 1 and 0 <= d_min <= d_avg <= d_max
        """
        if n < 1:
            raise ParameterError(f"Network size must be positive, got {n}")
        if not 0 <= d_min <= d_avg <= d_max:
            raise ParameterError(
                f"Degree statistics must satisfy 0 <= d_min <= d_avg <= d_max, "
                f"got d_min={d_min} d_avg={d_avg} d_max={d_max}"
            )
        self._n = int(n)
        self._stats = DegreeStats(d_min=int(d_min), d_max=int(d_max), d_avg=float(d_avg))

    @property
    def n(self) -> int:
        return self._n

    @property
    def stats(self) -> DegreeStats:
        return self._stats

    def describe(self) -> str:
        s = self._stats
        return f"provided n={self.n} d_min={s.d_min} d_max={s.d_max} d_avg={s.d_avg:.6f}"
