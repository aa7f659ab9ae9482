"""Degree rank estimation from node samples.

A sample of nodes is collected, the interested node's rank is computed
inside the sample (the local rank) and scaled by n / s. Three ways of
collecting the sample are supported:

- US: uniform sampling without replacement; needs global access.
- MH: Metropolis-Hastings random walk, whose stationary distribution is
  uniform; needs local access only.
- RW: simple random walk (degree-biased) re-sampled with probability
  proportional to 1 / degree; needs local access only.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..access import GlobalAccess, LocalAccess
from ..exceptions import DomainError, ParameterError
from .result import RankEstimate, clamp_rank

logger = logging.getLogger(__name__)

US = "US"
MH = "MH"
RW = "RW"
RW_REWEIGHTED = "RW-reweighted"

DEFAULT_BURN_IN = 100


@dataclass(frozen=True)
class Sample:
    """Sampled nodes with their degrees, in collection order, repeats kept."""

    nodes: np.ndarray
    degrees: np.ndarray
    method: str
    burn_in: int = 0
    seed: Optional[int] = None

    @property
    def s(self) -> int:
        return len(self.nodes)


def sample_size(sample_frac: float, n: int) -> int:
    """
    Number of entries for a sample fraction, ceil(sample_frac * n).

    Raises:
        ParameterError: If sample_frac is outside (0, 1]
    """
    if not 0.0 < sample_frac <= 1.0:
        raise ParameterError(f"Sample fraction must lie in (0, 1], got {sample_frac}")
    # rounding first keeps e.g. 0.01 * 10000 from ceiling to 101
    return max(1, math.ceil(round(sample_frac * n, 9)))


def sample_uniform(access: GlobalAccess, s: int, rng, seed: Optional[int] = None) -> Sample:
    """
    ``s`` distinct nodes drawn uniformly without replacement.

    Raises:
        ParameterError: Unless 1 <= s <= n
    """
    n = access.node_count()
    if not 1 <= s <= n:
        raise ParameterError(f"Uniform sample size must lie in [1, {n}], got {s}")
    seen = set()
    nodes = []
    while len(nodes) < s:
        u = access.random_node(rng)
        if u not in seen:
            seen.add(u)
            nodes.append(u)
    degrees = [access.degree(u) for u in nodes]
    return Sample(
        nodes=np.array(nodes, dtype=np.int64),
        degrees=np.array(degrees, dtype=np.int64),
        method=US,
        seed=seed,
    )


def _walk(access: LocalAccess, start: int, s: int, burn_in: int, rng, metropolis: bool):
    if s < 1:
        raise ParameterError(f"Walk sample size must be positive, got {s}")
    if burn_in < 0:
        raise ParameterError(f"Burn-in must be non-negative, got {burn_in}")
    current = start
    d_current = access.degree(current)
    if d_current == 0:
        raise DomainError(f"Walk cannot start at isolated node {start}")

    nodes = np.empty(s, dtype=np.int64)
    degrees = np.empty(s, dtype=np.int64)
    steps = burn_in + s
    for step in range(steps):
        if step >= burn_in:
            nodes[step - burn_in] = current
            degrees[step - burn_in] = d_current
            if step == steps - 1:
                break
        candidate = access.random_neighbor(current, rng)
        d_candidate = access.degree(candidate)
        # accept with min(1, d_current / d_candidate); a rejection is a self-loop step
        if not metropolis or d_candidate <= d_current or rng.random() * d_candidate < d_current:
            current, d_current = candidate, d_candidate
    return nodes, degrees


def mh_walk(
    access: LocalAccess,
    start: int,
    s: int,
    burn_in: int,
    rng,
    seed: Optional[int] = None,
) -> Sample:
    """
    Metropolis-Hastings random walk sample.

    From u a neighbor v is proposed uniformly and accepted with probability
    min(1, d_u / d_v), otherwise the walk stays at u. After ``burn_in``
    steps the current node is recorded at every step, self-loop steps
    included, until ``s`` entries are collected.

    Raises:
        DomainError: If ``start`` is isolated
    """
    nodes, degrees = _walk(access, start, s, burn_in, rng, metropolis=True)
    return Sample(nodes=nodes, degrees=degrees, method=MH, burn_in=burn_in, seed=seed)


def rw_walk(
    access: LocalAccess,
    start: int,
    s: int,
    burn_in: int,
    rng,
    seed: Optional[int] = None,
) -> Sample:
    """
    Simple random walk sample; each step moves to a uniform neighbor.

    Raises:
        DomainError: If ``start`` is isolated
    """
    nodes, degrees = _walk(access, start, s, burn_in, rng, metropolis=False)
    return Sample(nodes=nodes, degrees=degrees, method=RW, burn_in=burn_in, seed=seed)


def reweight(sample: Sample, rng, s_out: Optional[int] = None) -> Sample:
    """
    Re-sample entries with replacement, with probability proportional to 1 / degree.

    Args:
        sample: Random-walk sample
        rng: numpy Generator
        s_out: Output size (default: size of ``sample``)

    Raises:
        DomainError: If the sample is empty or holds a degree-0 entry
    """
    if sample.s == 0:
        raise DomainError("Cannot re-weight an empty sample")
    if np.any(sample.degrees <= 0):
        raise DomainError("Cannot re-weight entries of degree 0")
    size = sample.s if s_out is None else s_out
    weights = 1.0 / sample.degrees
    picks = rng.choice(sample.s, size=size, replace=True, p=weights / weights.sum())
    return Sample(
        nodes=sample.nodes[picks],
        degrees=sample.degrees[picks],
        method=RW_REWEIGHTED,
        burn_in=sample.burn_in,
        seed=sample.seed,
    )


def local_rank(sample: Sample, u: int, d_u: int) -> int:
    """1 + number of entries (other than ``u`` itself) with degree strictly above ``d_u``."""
    others = sample.nodes != u
    return 1 + int(np.count_nonzero(others & (sample.degrees > d_u)))


def local_ranks(sample: Sample, degrees) -> np.ndarray:
    """
    :func:`local_rank` for many interested nodes at once.

    An entry for the interested node itself has degree exactly d_u, so it
    never counts as strictly greater and needs no explicit exclusion here.
    """
    ordered = np.sort(sample.degrees)
    above = sample.s - np.searchsorted(ordered, np.asarray(degrees), side='right')
    return above + 1


def extrapolate(r_local, n: int, s: int):
    """
    Global rank estimate (n / s) * r_local, clamped into [1, n].

    Accepts a scalar or an array of local ranks.

    Raises:
        DomainError: If s < 1
    """
    if s < 1:
        raise DomainError(f"Sample size must be positive, got {s}")
    if np.ndim(r_local):
        return np.clip(np.asarray(r_local, dtype=float) * n / s, 1.0, float(n))
    return clamp_rank(n / s * r_local, n)


def _require_n(params) -> int:
    if params is None:
        raise ParameterError("Crawl-based estimation needs the network size from a parameter source")
    return params.n


def estimate_degree_rank_us(
    access: GlobalAccess,
    u: int,
    sample_frac: float,
    rng,
    params=None,
    seed: Optional[int] = None,
) -> RankEstimate:
    """
    Degree rank of ``u`` from a uniform sample.

    ``n`` comes from ``params`` when given, else from the access layer.
    """
    n = params.n if params is not None else access.node_count()
    s = sample_size(sample_frac, n)
    d_u = access.degree(u)
    sample = sample_uniform(access, s, rng, seed=seed)
    value = extrapolate(local_rank(sample, u, d_u), n, s)
    return RankEstimate(node=u, value=value, method="us", sample_frac=sample_frac, seed=seed)


def estimate_degree_rank_mh(
    access: LocalAccess,
    u: int,
    sample_frac: float,
    rng,
    params=None,
    burn_in: int = DEFAULT_BURN_IN,
    start: Optional[int] = None,
    seed: Optional[int] = None,
) -> RankEstimate:
    """
    Degree rank of ``u`` from a Metropolis-Hastings walk.

    The walk starts at ``start`` (default: ``u`` itself) and touches the
    graph through local capabilities only.
    """
    n = _require_n(params)
    s = sample_size(sample_frac, n)
    d_u = access.degree(u)
    sample = mh_walk(access, u if start is None else start, s, burn_in, rng, seed=seed)
    value = extrapolate(local_rank(sample, u, d_u), n, s)
    return RankEstimate(node=u, value=value, method="mh", sample_frac=sample_frac, seed=seed)


def estimate_degree_rank_rw(
    access: LocalAccess,
    u: int,
    sample_frac: float,
    rng,
    params=None,
    burn_in: int = DEFAULT_BURN_IN,
    start: Optional[int] = None,
    seed: Optional[int] = None,
) -> RankEstimate:
    """
    Degree rank of ``u`` from a re-weighted random walk.

    The walk collects s entries, is re-sampled to s entries with probability
    proportional to 1 / degree, and the uniform-sample formula is applied.
    """
    n = _require_n(params)
    s = sample_size(sample_frac, n)
    d_u = access.degree(u)
    walk = rw_walk(access, u if start is None else start, s, burn_in, rng, seed=seed)
    sample = reweight(walk, rng, s_out=s)
    value = extrapolate(local_rank(sample, u, d_u), n, s)
    return RankEstimate(node=u, value=value, method="rw", sample_frac=sample_frac, seed=seed)


class SamplingEstimator:
    """Sampling-based degree-rank estimation bound to a RankEstimator."""

    METHODS = ("us", "mh", "rw")

    def __init__(self, estimator):
        """Initialize with the owning estimator."""
        self.estimator = estimator

    def estimate(
        self,
        u: int,
        method: str,
        seed: Optional[int] = None,
        start: Optional[int] = None,
    ) -> RankEstimate:
        """
        Estimate the degree rank of ``u`` with one sampling method.

        Args:
            u: Internal node id
            method: "us", "mh" or "rw"
            seed: RNG seed (default: the estimator's seed)
            start: Walk start node for "mh"/"rw" (default: ``u``)

        Returns:
            Real-valued estimate in [1, n]
        """
        est = self.estimator
        seed = est.seed if seed is None else seed
        rng = np.random.default_rng(seed)
        if method == "us":
            result = estimate_degree_rank_us(
                GlobalAccess(est.graph), u, est.sample_frac, rng, params=est.params, seed=seed
            )
        elif method in ("mh", "rw"):
            walker = estimate_degree_rank_mh if method == "mh" else estimate_degree_rank_rw
            result = walker(
                LocalAccess(est.graph), u, est.sample_frac, rng,
                params=est.params, burn_in=est.burn_in, start=start, seed=seed,
            )
        else:
            raise ParameterError(f"Unknown sampling method: {method}")
        if est.debug:
            logger.debug("%s estimate for node %d: %.6f (seed=%s)", method, u, result.value, seed)
        return result
