"""Evaluation protocol: absolute error versus actual rank over seeded iterations.

Exact ranks are computed once with the oracles. In iteration ``i`` every
sampling method draws one sample with seed ``base_seed + i`` and that sample
serves every evaluated node, the way an interested node would use a crawl it
collected itself. Results are written as CSV.
"""

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from scipy import stats

from .access import GlobalAccess, LocalAccess
from .estimator import METHODS, metric_of
from .estimators.closeness import ClosenessModel, reverse_rank
from .estimators.powerlaw import PowerLawParams, pl_rank_curve
from .estimators.sampling import (
    extrapolate,
    local_ranks,
    mh_walk,
    reweight,
    rw_walk,
    sample_size,
    sample_uniform,
)
from .exceptions import ConfigurationError, GlobalRankException, ParameterError
from .graph import Graph, largest_connected_component
from .oracles import all_closeness, degree_vector
from .params import GroundTruthParameters, ParameterSource

logger = logging.getLogger(__name__)

THREADS_ENV = "RANK_THREADS"


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Worker count: explicit value, else ``RANK_THREADS``, else 1.

    Raises:
        ConfigurationError: If ``RANK_THREADS`` is not a positive integer
    """
    if workers is not None:
        if workers < 1:
            raise ParameterError(f"Worker count must be positive, got {workers}")
        return workers
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Knobs of one evaluation run.

    ``eval_nodes=None`` evaluates every node; an integer selects that many
    nodes spread over the rank axis (see :func:`stratify_eval_nodes`).
    """

    methods: Tuple[str, ...] = ("us", "mh", "rw")
    sample_frac: float = 0.01
    iterations: int = 20
    base_seed: int = 0
    eval_nodes: Optional[int] = None
    burn_in: int = 100
    slope: float = 13.0
    workers: Optional[int] = None

    def __post_init__(self):
        if not self.methods:
            raise ParameterError("At least one method is required")
        for method in self.methods:
            if method not in METHODS:
                raise ParameterError(f"Unknown estimation method: {method}")
        if len(set(self.methods)) != len(self.methods):
            raise ParameterError("Methods must not repeat")
        if len({metric_of(m) for m in self.methods}) > 1:
            raise ParameterError("Degree and closeness methods cannot share one experiment")
        if not 0.0 < self.sample_frac <= 1.0:
            raise ParameterError(f"Sample fraction must lie in (0, 1], got {self.sample_frac}")
        if self.iterations < 1:
            raise ParameterError(f"Iterations must be at least 1, got {self.iterations}")
        if self.eval_nodes is not None and self.eval_nodes < 1:
            raise ParameterError(f"Evaluated node count must be positive, got {self.eval_nodes}")

    @property
    def metric(self) -> str:
        return metric_of(self.methods[0])

    @property
    def seeds(self) -> List[int]:
        return [self.base_seed + i for i in range(self.iterations)]


@dataclass(frozen=True)
class MethodError:
    """Error summary of one method on one node."""

    mean_est: float
    mae: float
    std: float


@dataclass(frozen=True)
class ErrorRecord:
    """Actual rank of one node and the error of every evaluated method."""

    node: str
    actual_rank: int
    methods: Dict[str, MethodError] = field(default_factory=dict)


def stratify_eval_nodes(graph: Graph, count: int, ranks: np.ndarray) -> np.ndarray:
    """
    ``count`` nodes spread evenly over the rank axis.

    Distinct rank levels are picked at evenly spaced positions, taking the
    lowest id within a level, so the result always holds the rank-1 node and
    a node of maximum rank and, while ``count`` does not exceed the number
    of levels, strictly increasing ranks. With fewer levels than ``count``
    the nodes are taken at evenly spaced positions of the (rank, id) order.

    Raises:
        ParameterError: Unless 1 <= count <= n
    """
    n = graph.n
    if not 1 <= count <= n:
        raise ParameterError(f"Evaluated node count must lie in [1, {n}], got {count}")
    ranks = np.asarray(ranks)
    order = np.lexsort((np.arange(n), ranks))
    _, first = np.unique(ranks[order], return_index=True)

    def spread(size: int) -> np.ndarray:
        if count == 1:
            return np.zeros(1, dtype=np.int64)
        return np.floor(np.linspace(0, size - 1, count) + 0.5).astype(np.int64)

    if count <= len(first):
        return order[first[spread(len(first))]]
    return order[spread(n)]


def _walk_start(graph: Graph, rng) -> int:
    candidates = np.flatnonzero(graph.degrees > 0)
    return int(candidates[rng.integers(len(candidates))])


def _sampled_estimates(
    graph: Graph,
    method: str,
    nodes: np.ndarray,
    n: int,
    cfg: ExperimentConfig,
    seed: int,
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    s = sample_size(cfg.sample_frac, n)
    if method == "us":
        sample = sample_uniform(GlobalAccess(graph), s, rng, seed=seed)
    elif method == "mh":
        sample = mh_walk(LocalAccess(graph), _walk_start(graph, rng), s, cfg.burn_in, rng, seed=seed)
    else:
        walk = rw_walk(LocalAccess(graph), _walk_start(graph, rng), s, cfg.burn_in, rng, seed=seed)
        sample = reweight(walk, rng, s_out=s)
    logger.debug(
        "Iteration seed=%d method=%s s=%d distinct=%d",
        seed, method, s, len(np.unique(sample.nodes)),
    )
    return extrapolate(local_ranks(sample, graph.degrees[nodes]), n, s)


def run_experiment(
    graph: Graph,
    cfg: ExperimentConfig,
    params: Optional[ParameterSource] = None,
) -> List[ErrorRecord]:
    """
    Absolute error of every configured method on every evaluated node.

    Closeness experiments run on the largest connected component.

    Args:
        graph: Graph to evaluate on
        cfg: Experiment configuration
        params: Parameter source for n and degree statistics (default: graph)

    Returns:
        Records sorted by actual rank, then node id

    Raises:
        GlobalRankException: Failures are re-raised with the method named
    """
    workers = resolve_workers(cfg.workers)
    if cfg.metric == "closeness":
        graph, _ = largest_connected_component(graph)
        values = all_closeness(graph, workers=workers)
    else:
        values = degree_vector(graph)
    actual = values.ranks()
    params = params or GroundTruthParameters(graph)

    if cfg.eval_nodes is None:
        nodes = np.arange(graph.n, dtype=np.int64)
    else:
        nodes = stratify_eval_nodes(graph, cfg.eval_nodes, actual)
    logger.info(
        "Evaluating %d nodes with %s over %d iterations",
        len(nodes), ",".join(cfg.methods), cfg.iterations,
    )

    estimates: Dict[str, np.ndarray] = {}
    for method in cfg.methods:
        try:
            if method == "pl":
                curve = pl_rank_curve(PowerLawParams.from_source(params), graph.degrees[nodes])
                estimates[method] = np.tile(curve, (cfg.iterations, 1))
            elif method == "closeness-sigmoid":
                model = ClosenessModel.build(graph, slope=cfg.slope)
                curve = np.array([model.rank_for_closeness(c) for c in values.values[nodes]])
                estimates[method] = np.tile(curve, (cfg.iterations, 1))
            else:
                def one(seed, method=method):
                    return _sampled_estimates(graph, method, nodes, params.n, cfg, seed)

                if workers > 1:
                    with ThreadPoolExecutor(max_workers=workers) as pool:
                        rows = list(pool.map(one, cfg.seeds))
                else:
                    rows = [one(seed) for seed in cfg.seeds]
                estimates[method] = np.vstack(rows)
        except GlobalRankException as e:
            e.message = f"{method}: {e.message}"
            e.args = (e.message,)
            raise
        logger.info("Finished method %s", method)

    summaries = {}
    for method, matrix in estimates.items():
        errors = np.abs(matrix - actual[nodes])
        summaries[method] = (matrix.mean(axis=0), errors.mean(axis=0), errors.std(axis=0))

    labels = graph.labels
    order = np.lexsort((nodes, actual[nodes]))
    records = []
    for k in order:
        records.append(ErrorRecord(
            node=labels[nodes[k]],
            actual_rank=int(actual[nodes[k]]),
            methods={
                method: MethodError(
                    mean_est=float(mean[k]), mae=float(mae[k]), std=float(std[k])
                )
                for method, (mean, mae, std) in summaries.items()
            },
        ))
    return records


def experiment_metadata(graph: Graph, cfg: ExperimentConfig, params: Optional[ParameterSource] = None) -> Dict[str, str]:
    """Config echo, graph size and seeds for the CSV comment header."""
    params = params or GroundTruthParameters(graph)
    return {
        "methods": ",".join(cfg.methods),
        "metric": cfg.metric,
        "sample_frac": f"{cfg.sample_frac:g}",
        "iterations": str(cfg.iterations),
        "seeds": f"{cfg.base_seed}..{cfg.base_seed + cfg.iterations - 1}",
        "burn_in": str(cfg.burn_in),
        "slope": f"{cfg.slope:g}",
        "eval_nodes": "all" if cfg.eval_nodes is None else str(cfg.eval_nodes),
        "graph": f"n={graph.n} m={graph.m}",
        "parameters": params.describe(),
    }


def _write_metadata(stream: TextIO, metadata: Optional[Dict[str, str]]) -> None:
    for key, value in (metadata or {}).items():
        stream.write(f"# {key}={value}\n")


def emit_csv(
    records: Sequence[ErrorRecord],
    stream: TextIO,
    methods: Optional[Sequence[str]] = None,
    metadata: Optional[Dict[str, str]] = None,
) -> None:
    """
    Write error records as CSV.

    Columns are ``node,actual_rank`` followed by ``<method>_mean_est``,
    ``<method>_mae`` and ``<method>_std`` per method; floats carry six
    decimals. ``metadata`` is written first as '#'-prefixed lines.
    """
    if methods is None:
        methods = list(records[0].methods) if records else []
    _write_metadata(stream, metadata)
    writer = csv.writer(stream, lineterminator="\n")
    header = ["node", "actual_rank"]
    for method in methods:
        header += [f"{method}_mean_est", f"{method}_mae", f"{method}_std"]
    writer.writerow(header)
    for record in records:
        row = [record.node, str(record.actual_rank)]
        for method in methods:
            err = record.methods[method]
            row += [f"{err.mean_est:.6f}", f"{err.mae:.6f}", f"{err.std:.6f}"]
        writer.writerow(row)


def read_csv(stream: TextIO) -> Tuple[List[ErrorRecord], Dict[str, str]]:
    """Parse CSV written by :func:`emit_csv` back into records and metadata."""
    metadata: Dict[str, str] = {}
    body = []
    for line in stream:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
        elif line.strip():
            body.append(line)

    rows = list(csv.reader(body))
    if not rows:
        return [], metadata
    header = rows[0]
    methods = [col[:-len("_mean_est")] for col in header[2:] if col.endswith("_mean_est")]
    records = []
    for row in rows[1:]:
        values = dict(zip(header, row))
        records.append(ErrorRecord(
            node=values["node"],
            actual_rank=int(values["actual_rank"]),
            methods={
                m: MethodError(
                    mean_est=float(values[f"{m}_mean_est"]),
                    mae=float(values[f"{m}_mae"]),
                    std=float(values[f"{m}_std"]),
                )
                for m in methods
            },
        ))
    return records, metadata


def decile_errors(records: Sequence[ErrorRecord], method: str, bins: int = 10) -> np.ndarray:
    """Mean absolute error of ``method`` per rank bin (records ordered by actual rank)."""
    ordered = sorted(records, key=lambda r: r.actual_rank)
    mae = np.array([r.methods[method].mae for r in ordered])
    return np.array([chunk.mean() for chunk in np.array_split(mae, bins)])


def rank_trend(records: Sequence[ErrorRecord], method: str, bins: int = 10) -> float:
    """Spearman correlation between rank-bin index and bin mean absolute error."""
    means = decile_errors(records, method, bins)
    return float(stats.spearmanr(np.arange(len(means)), means).correlation)


def mean_relative_error(records: Sequence[ErrorRecord], method: str) -> float:
    """Mean over nodes of mean absolute error divided by actual rank."""
    return float(np.mean([r.methods[method].mae / r.actual_rank for r in records]))


@dataclass(frozen=True)
class CurvePoint:
    node: str
    closeness: float
    actual_reverse_rank: int
    estimated_reverse_rank: float


def closeness_curve(graph: Graph, slope: float = 13.0, workers: Optional[int] = None) -> List[CurvePoint]:
    """
    Reverse rank versus closeness: exact values and the fitted logistic curve.

    Runs on the largest connected component; points are ordered by closeness
    (then node id). Costs n BFS traversals for the exact side.
    """
    component, _ = largest_connected_component(graph)
    values = all_closeness(component, workers=resolve_workers(workers))
    actual = values.ranks()
    model = ClosenessModel.build(component, slope=slope)
    n = component.n
    labels = component.labels
    order = np.lexsort((np.arange(n), values.values))
    return [
        CurvePoint(
            node=labels[u],
            closeness=float(values.values[u]),
            actual_reverse_rank=int(n + 1 - actual[u]),
            estimated_reverse_rank=reverse_rank(float(values.values[u]), model.params),
        )
        for u in order
    ]


def emit_curve_csv(points: Sequence[CurvePoint], stream: TextIO, metadata: Optional[Dict[str, str]] = None) -> None:
    """Write a closeness curve as CSV."""
    _write_metadata(stream, metadata)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["node", "closeness", "actual_reverse_rank", "estimated_reverse_rank"])
    for p in points:
        writer.writerow([p.node, f"{p.closeness:.6f}", str(p.actual_reverse_rank),
                         f"{p.estimated_reverse_rank:.6f}"])
