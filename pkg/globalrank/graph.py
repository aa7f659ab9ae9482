"""Graph representation, edge-list ingestion and synthetic generators.

Every other module consumes graphs through :class:`Graph`. Internally a graph
is a compressed sparse row (CSR) adjacency over dense node ids ``[0, n)``;
external labels (arbitrary strings from an edge-list file) are kept alongside
and mapped back on output.
"""

import gzip
import io
import logging
import zlib
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .exceptions import NodeNotFoundError, ParameterError, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeStats:
    """Minimum, maximum and average degree of a graph."""

    d_min: int
    d_max: int
    d_avg: float


@dataclass(frozen=True)
class IngestStats:
    """What :func:`load_edge_list` read and what it dropped."""

    lines: int
    self_loops: int
    duplicates: int


class Graph:
    """Immutable simple undirected graph with dense internal node ids."""

    def __init__(
        self,
        indptr: np.ndarray,
        indices: np.ndarray,
        labels: Optional[Sequence[str]] = None,
        ingest: Optional[IngestStats] = None,
    ):
        """
        Build a graph from CSR arrays and check its invariants.

        Args:
            indptr: Row pointer array of length n + 1
            indices: Concatenated, per-row ascending neighbor ids
            labels: External label for each internal id (default: str(id))
            ingest: Ingestion counts when the graph came from an edge list

        Raises:
            ParameterError: If the arrays do not describe a simple,
                symmetric, sorted adjacency
        """
        self._indptr = np.asarray(indptr, dtype=np.int64)
        self._indices = np.asarray(indices, dtype=np.int64)
        self._indptr.setflags(write=False)
        self._indices.setflags(write=False)
        n = len(self._indptr) - 1
        if labels is None:
            labels = [str(u) for u in range(n)]
        elif len(labels) != n:
            raise ParameterError(f"Expected {n} labels, got {len(labels)}")
        self._labels: List[str] = list(labels)
        self._ingest = ingest
        self._validate()

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges,
        labels: Optional[Sequence[str]] = None,
        ingest: Optional[IngestStats] = None,
    ) -> "Graph":
        """
        Build a graph on ``n`` nodes from an iterable of ``(u, v)`` id pairs.

        Self-loops are dropped and duplicate (or reversed) pairs collapse to a
        single undirected edge.
        """
        if n < 0:
            raise ParameterError(f"Node count must be non-negative, got {n}")
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ParameterError(f"Edge endpoint outside [0, {n})")

        keep = pairs[:, 0] != pairs[:, 1]
        lo = np.minimum(pairs[keep, 0], pairs[keep, 1])
        hi = np.maximum(pairs[keep, 0], pairs[keep, 1])
        keys = np.unique(lo * n + hi) if n else np.empty(0, dtype=np.int64)
        lo, hi = keys // max(n, 1), keys % max(n, 1)

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst, labels=labels, ingest=ingest)

    def _validate(self) -> None:
        n = self.n
        if n < 0 or self._indptr[0] != 0 or self._indptr[-1] != len(self._indices):
            raise ParameterError("Malformed CSR row pointer")
        if np.any(np.diff(self._indptr) < 0):
            raise ParameterError("Malformed CSR row pointer")
        if len(self._indices) == 0:
            return
        if self._indices.min() < 0 or self._indices.max() >= n:
            raise ParameterError("Neighbor id outside [0, n)")

        rows = np.repeat(np.arange(n, dtype=np.int64), self.degrees)
        if np.any(rows == self._indices):
            raise ParameterError("Graph contains a self-loop")
        same_row = rows[1:] == rows[:-1]
        if np.any(np.diff(self._indices)[same_row] <= 0):
            raise ParameterError("Adjacency lists must be strictly ascending")
        forward = rows * n + self._indices
        backward = np.sort(self._indices * n + rows)
        if not np.array_equal(forward, backward):
            raise ParameterError("Adjacency is not symmetric")

    @property
    def n(self) -> int:
        """Number of nodes."""
        return len(self._indptr) - 1

    @property
    def m(self) -> int:
        """Number of undirected edges."""
        return len(self._indices) // 2

    @property
    def ingest(self) -> Optional[IngestStats]:
        """Ingestion counts, or None for graphs not read from an edge list."""
        return self._ingest

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree of every node, indexed by internal id."""
        degrees = np.diff(self._indptr)
        degrees.setflags(write=False)
        return degrees

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: u for u, label in enumerate(self._labels)}

    @property
    def labels(self) -> List[str]:
        return list(self._labels)

    def degree(self, u: int) -> int:
        """Degree of node ``u``."""
        self._check_node(u)
        return int(self._indptr[u + 1] - self._indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor ids of node ``u`` (read-only view)."""
        self._check_node(u)
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def label(self, u: int) -> str:
        """External label of internal id ``u``."""
        self._check_node(u)
        return self._labels[u]

    def node_id(self, label) -> int:
        """
        Internal id of an external label.

        Raises:
            NodeNotFoundError: If no node carries the label
        """
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise NodeNotFoundError(f"Unknown node label: {label!r}", node=label)

    def edges(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, in ascending order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        upper = rows < self._indices
        return np.column_stack((rows[upper], self._indices[upper]))

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Unit-weight adjacency matrix, as consumed by scipy.sparse.csgraph."""
        data = np.ones(len(self._indices), dtype=np.int8)
        return sp.csr_matrix((data, self._indices, self._indptr), shape=(self.n, self.n))

    def to_csr(self) -> sp.csr_matrix:
        return self.csr

    def _check_node(self, u) -> None:
        if not 0 <= u < self.n:
            raise NodeNotFoundError(f"Node id {u} outside [0, {self.n})", node=u)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def load_edge_list(stream: TextIO) -> Graph:
    """
    Parse a whitespace-separated edge list.

    Lines starting with '#' and blank lines are skipped. Labels are mapped
    to dense ids in first-appearance order; self-loops are dropped and
    duplicate edges collapsed (both are counted in ``graph.ingest``).

    Args:
        stream: Text stream with one ``label label`` pair per line

    Returns:
        The parsed graph

    Raises:
        ParseError: On a line without exactly two tokens, or empty input
    """
    index: Dict[str, int] = {}
    labels: List[str] = []
    pairs: List[Tuple[int, int]] = []

    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(
                f"Line {line_number}: expected 2 node labels, got {len(tokens)}",
                line_number=line_number,
            )
        ids = []
        for token in tokens:
            node = index.get(token)
            if node is None:
                node = len(labels)
                index[token] = node
                labels.append(token)
            ids.append(node)
        pairs.append((ids[0], ids[1]))

    if not pairs:
        raise ParseError("Edge list contains no edges")

    self_loops = sum(1 for u, v in pairs if u == v)
    distinct = len({(min(u, v), max(u, v)) for u, v in pairs if u != v})
    ingest = IngestStats(
        lines=len(pairs),
        self_loops=self_loops,
        duplicates=len(pairs) - self_loops - distinct,
    )
    graph = Graph.from_edges(len(labels), pairs, labels=labels, ingest=ingest)
    logger.info(
        "Loaded graph n=%d m=%d (%d lines, %d self-loops dropped, %d duplicates collapsed)",
        graph.n, graph.m, ingest.lines, ingest.self_loops, ingest.duplicates,
    )
    return graph


GZIP_MAGIC = b"\x1f\x8b"


def load_edge_list_bytes(payload: bytes) -> Graph:
    """
    Parse a UTF-8 edge list given as raw bytes, unpacking gzip payloads first.

    Raises:
        ParseError: On a corrupt gzip payload, undecodable text, or any
            error :func:`load_edge_list` raises
    """
    if payload[:2] == GZIP_MAGIC:
        try:
            payload = gzip.decompress(payload)
        except (OSError, EOFError, zlib.error) as e:
            raise ParseError(f"Corrupt gzip payload: {e}")
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"Edge list is not UTF-8 text (byte {e.start})")
    return load_edge_list(io.StringIO(text))


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write ``graph`` as an edge list using its external labels."""
    stream.write(f"# n={graph.n} m={graph.m}\n")
    labels = graph.labels
    for u, v in graph.edges():
        stream.write(f"{labels[u]} {labels[v]}\n")


def generate_ba(n: int, m_attach: int, seed=None) -> Graph:
    """
    Generate a Barabasi-Albert preferential attachment graph.

    Starts with a clique of ``m_attach + 1`` nodes; every later node attaches
    ``m_attach`` edges to distinct existing nodes chosen proportionally to
    their current degree.

    Args:
        n: Total number of nodes
        m_attach: Edges added per new node
        seed: Seed for numpy's default generator

    Returns:
        Connected graph with minimum degree ``m_attach``

    Raises:
        ParameterError: If ``m_attach < 1`` or ``n <= m_attach``
    """
    if m_attach < 1 or n <= m_attach:
        raise ParameterError(f"BA model needs n > m_attach >= 1, got n={n}, m_attach={m_attach}")

    rng = np.random.default_rng(seed)
    core = m_attach + 1
    total = core * (core - 1) // 2 + (n - core) * m_attach
    edges = np.empty((total, 2), dtype=np.int64)
    # every node appears once per incident edge, so a uniform draw from this
    # array picks a node with probability proportional to its degree
    repeated = np.empty(2 * total, dtype=np.int64)

    k = 0
    for i in range(core):
        for j in range(i + 1, core):
            edges[k] = (i, j)
            repeated[2 * k], repeated[2 * k + 1] = i, j
            k += 1

    for new in range(core, n):
        filled = 2 * k
        targets = set()
        while len(targets) < m_attach:
            draws = rng.integers(0, filled, size=m_attach - len(targets))
            targets.update(repeated[draws].tolist())
        for t in sorted(targets):
            edges[k] = (t, new)
            repeated[2 * k], repeated[2 * k + 1] = t, new
            k += 1

    logger.debug("Generated BA graph n=%d m_attach=%d seed=%s", n, m_attach, seed)
    return Graph.from_edges(n, edges)


def generate_er(n: int, p_edge: float, seed=None) -> Graph:
    """
    Generate an Erdos-Renyi G(n, p) graph.

    Each row ``u`` draws the number of its higher-id neighbors from a
    binomial and then a uniform subset of that size, which is equivalent to
    flipping an independent coin for every pair.

    Raises:
        ParameterError: If ``p_edge`` is outside [0, 1] or ``n`` is negative
    """
    if not 0.0 <= p_edge <= 1.0:
        raise ParameterError(f"Edge probability must lie in [0, 1], got {p_edge}")
    if n < 0:
        raise ParameterError(f"Node count must be non-negative, got {n}")

    rng = np.random.default_rng(seed)
    chunks = []
    for u in range(n - 1):
        span = n - u - 1
        k = int(rng.binomial(span, p_edge))
        if k:
            targets = u + 1 + rng.choice(span, size=k, replace=False)
            chunks.append(np.column_stack((np.full(k, u, dtype=np.int64), targets)))
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)

    logger.debug("Generated ER graph n=%d p=%g seed=%s", n, p_edge, seed)
    return Graph.from_edges(n, edges)


def sample_power_law_degrees(n: int, gamma: float, d_min: int, d_max: int, rng) -> np.ndarray:
    """
    Draw ``n`` integer degrees from a truncated power law.

    Values come from the continuous density proportional to x^(-gamma) on
    [d_min, d_max + 1) by inverse transform, floored to integers, so
    P(degree > d) matches the closed-form tail of the density.
    """
    if gamma == 1.0 or d_min < 1 or d_max < d_min:
        raise ParameterError("Power law needs gamma != 1 and 1 <= d_min <= d_max")
    a = float(d_min) ** (1.0 - gamma)
    b = float(d_max + 1) ** (1.0 - gamma)
    u = rng.random(n)
    x = (a + u * (b - a)) ** (1.0 / (1.0 - gamma))
    return np.clip(np.floor(x).astype(np.int64), d_min, d_max)


def degree_stats(graph: Graph) -> DegreeStats:
    """
    Exact minimum, maximum and average degree.

    Raises:
        ParameterError: On an empty graph
    """
    if graph.n < 1:
        raise ParameterError("Degree statistics need at least one node")
    degrees = graph.degrees
    return DegreeStats(
        d_min=int(degrees.min()),
        d_max=int(degrees.max()),
        d_avg=2.0 * graph.m / graph.n,
    )


def component_labels(graph: Graph) -> np.ndarray:
    """Connected-component label of every node."""
    _, labels = connected_components(graph.csr, directed=False, return_labels=True)
    return labels


def largest_connected_component(graph: Graph) -> Tuple[Graph, np.ndarray]:
    """
    Induced subgraph on the largest connected component.

    Ties between equally large components go to the one containing the
    smallest internal id. Node order is preserved.

    Returns:
        (component graph, mapping) where ``mapping[old_id]`` is the new id,
        or -1 for nodes outside the component
    """
    if graph.n < 1:
        raise ParameterError("Largest component of an empty graph is undefined")

    labels = component_labels(graph)
    sizes = np.bincount(labels)
    _, first = np.unique(labels, return_index=True)
    # first[c] is the smallest node id in component c
    best = min(range(len(sizes)), key=lambda c: (-sizes[c], first[c]))
    if sizes[best] == graph.n:
        return graph, np.arange(graph.n, dtype=np.int64)

    nodes = np.flatnonzero(labels == best)
    mapping = np.full(graph.n, -1, dtype=np.int64)
    mapping[nodes] = np.arange(len(nodes), dtype=np.int64)

    rows = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees)
    inside = mapping[rows] >= 0
    new_rows = mapping[rows[inside]]
    new_indices = mapping[graph.indices[inside]]
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_rows, minlength=len(nodes)), out=indptr[1:])

    all_labels = graph.labels
    component = Graph(indptr, new_indices, labels=[all_labels[u] for u in nodes])
    logger.debug("Largest component keeps %d of %d nodes", component.n, graph.n)
    return component, mapping
