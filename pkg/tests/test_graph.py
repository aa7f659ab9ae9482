"""Tests for graph ingestion, generators and components."""

import gzip
import io

import networkx as nx
import numpy as np
import pytest

from globalrank.exceptions import NodeNotFoundError, ParameterError, ParseError
from globalrank.graph import (
    Graph,
    component_labels,
    degree_stats,
    generate_ba,
    generate_er,
    largest_connected_component,
    load_edge_list,
    load_edge_list_bytes,
    sample_power_law_degrees,
    write_edge_list,
)
from globalrank.estimators.powerlaw import estimate_gamma


def to_networkx(graph: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges().tolist())
    return g


class TestLoadEdgeList:
    """Test edge-list parsing."""

    def test_parse_with_comments_loops_and_duplicates(self):
        """Test that comments are skipped, self-loops dropped and duplicates collapsed."""
        text = "# a triangle\n1 2\n2 3\n3 1\n1 1\n2 1\n\n"
        graph = load_edge_list(io.StringIO(text))

        assert graph.n == 3
        assert graph.m == 3
        assert graph.labels == ["1", "2", "3"]
        assert graph.degrees.tolist() == [2, 2, 2]
        assert graph.ingest.lines == 5
        assert graph.ingest.self_loops == 1
        assert graph.ingest.duplicates == 1

    def test_labels_map_in_first_appearance_order(self):
        """Test that arbitrary labels get dense ids in order of appearance."""
        graph = load_edge_list(io.StringIO("alice bob\ncarol alice\n"))

        assert graph.node_id("alice") == 0
        assert graph.node_id("bob") == 1
        assert graph.node_id("carol") == 2
        assert graph.label(2) == "carol"
        assert graph.neighbors(0).tolist() == [1, 2]

    def test_malformed_line(self):
        """Test that a line with three tokens reports its line number."""
        with pytest.raises(ParseError) as exc:
            load_edge_list(io.StringIO("1 2\n2 3 4\n"))

        assert exc.value.line_number == 2
        assert "Line 2" in str(exc.value)

    def test_empty_input(self):
        """Test that input without edges is rejected."""
        with pytest.raises(ParseError):
            load_edge_list(io.StringIO(""))
        with pytest.raises(ParseError):
            load_edge_list(io.StringIO("# nothing here\n\n"))

    def test_write_then_load_keeps_edges(self):
        """Test that written edge lists parse back to the same labelled edges."""
        graph = generate_ba(60, 2, seed=0)
        buffer = io.StringIO()
        write_edge_list(graph, buffer)
        loaded = load_edge_list(io.StringIO(buffer.getvalue()))

        def labelled(g):
            labels = g.labels
            return {frozenset((labels[u], labels[v])) for u, v in g.edges().tolist()}

        assert buffer.getvalue().startswith(f"# n={graph.n} m={graph.m}\n")
        assert loaded.m == graph.m
        assert labelled(loaded) == labelled(graph)

    def test_ingest_is_read_only(self):
        """Test that ingestion counts are fixed at construction."""
        graph = load_edge_list(io.StringIO("a b\nb a\na a\nb c\n"))

        assert graph.ingest.duplicates == 1
        assert graph.ingest.self_loops == 1
        assert graph.ingest.lines - graph.ingest.self_loops - graph.ingest.duplicates == graph.m
        with pytest.raises(AttributeError):
            graph.ingest = None
        assert generate_ba(20, 2, seed=0).ingest is None


class TestLoadEdgeListBytes:
    """Test parsing of raw and gzip-compressed edge lists."""

    def test_gzip_and_plain_agree(self):
        """Test that a gzip payload parses to the same graph as its text."""
        text = b"# comment\n0 1\n1 2\n2 0\n"
        plain = load_edge_list_bytes(text)
        packed = load_edge_list_bytes(gzip.compress(text))

        assert packed.n == plain.n == 3
        assert packed.edges().tolist() == plain.edges().tolist()
        assert packed.labels == plain.labels

    def test_not_utf8(self):
        """Test that undecodable bytes are parse errors."""
        with pytest.raises(ParseError):
            load_edge_list_bytes(b"0 1\n\xff\xfe 2\n")

    def test_truncated_gzip(self):
        """Test that a cut-off gzip payload is a parse error."""
        packed = gzip.compress(b"0 1\n1 2\n" * 100)

        with pytest.raises(ParseError):
            load_edge_list_bytes(packed[:20])


class TestGraph:
    """Test the CSR graph type."""

    def test_from_edges_collapses_duplicates(self):
        """Test that reversed and repeated pairs become one edge."""
        graph = Graph.from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2)])

        assert graph.m == 1
        assert graph.degree(0) == 1
        assert graph.degree(2) == 0
        assert graph.edges().tolist() == [[0, 1]]

    def test_sum_of_degrees(self):
        """Test that m equals half the degree sum."""
        graph = generate_er(150, 0.05, seed=3)

        assert int(graph.degrees.sum()) == 2 * graph.m

    def test_asymmetric_csr_rejected(self):
        """Test that a one-directional adjacency is rejected."""
        with pytest.raises(ParameterError):
            Graph(np.array([0, 1, 1]), np.array([1]))

    def test_self_loop_rejected(self):
        """Test that a CSR self-loop is rejected."""
        with pytest.raises(ParameterError):
            Graph(np.array([0, 1]), np.array([0]))

    def test_unknown_nodes(self, path_graph):
        """Test lookups of unknown labels and ids."""
        with pytest.raises(NodeNotFoundError):
            path_graph.node_id("nope")
        with pytest.raises(NodeNotFoundError):
            path_graph.degree(5)

    def test_csr_matches_adjacency(self, path_graph):
        """Test the scipy adjacency matrix."""
        csr = path_graph.to_csr()

        assert csr.shape == (5, 5)
        assert csr.nnz == 8
        assert csr[1, 2] == 1 and csr[2, 1] == 1
        assert csr[0, 2] == 0


class TestGenerators:
    """Test the synthetic graph generators."""

    def test_ba_shape(self):
        """Test node count, edge count and minimum degree of a BA graph."""
        graph = generate_ba(1000, 5, seed=42)

        assert graph.n == 1000
        assert graph.m == 15 + (1000 - 6) * 5
        assert graph.degrees.min() == 5
        assert nx.is_connected(to_networkx(graph))

    def test_ba_deterministic(self):
        """Test that equal seeds give equal graphs."""
        a = generate_ba(500, 3, seed=7)
        b = generate_ba(500, 3, seed=7)
        c = generate_ba(500, 3, seed=8)

        assert np.array_equal(a.indices, b.indices)
        assert not np.array_equal(a.indices, c.indices)

    def test_ba_invalid(self):
        """Test that n must exceed m_attach."""
        with pytest.raises(ParameterError):
            generate_ba(5, 5, seed=1)
        with pytest.raises(ParameterError):
            generate_ba(10, 0, seed=1)

    def test_ba_degree_exponent(self):
        """Test that the degree tail of a BA graph is a power law with exponent near 3."""
        graph = generate_ba(10000, 5, seed=42)
        degrees = graph.degrees
        d = np.arange(5, 101)
        ccdf = np.array([np.mean(degrees >= k) for k in d])
        slope = np.polyfit(np.log(d), np.log(ccdf), 1)[0]
        fitted = 1.0 - slope

        assert 2.0 <= fitted <= 3.5
        assert estimate_gamma(degree_stats(graph)) == pytest.approx(3.0, abs=0.05)

    def test_er_extremes(self):
        """Test p = 0 and p = 1."""
        assert generate_er(30, 0.0, seed=1).m == 0
        assert generate_er(30, 1.0, seed=1).m == 30 * 29 // 2

    def test_er_density(self):
        """Test that the edge count is close to p * n(n-1)/2."""
        graph = generate_er(400, 0.05, seed=11)
        expected = 0.05 * 400 * 399 / 2

        assert abs(graph.m - expected) < 5 * np.sqrt(expected)

    def test_er_invalid(self):
        """Test that p outside [0, 1] is rejected."""
        with pytest.raises(ParameterError):
            generate_er(10, 1.5, seed=1)

    def test_power_law_degrees_in_range(self):
        """Test that power-law degrees stay in [d_min, d_max] and follow the tail."""
        rng = np.random.default_rng(0)
        degrees = sample_power_law_degrees(100000, 2.5, 1, 1000, rng)

        assert degrees.min() >= 1
        assert degrees.max() <= 1000
        # P(degree >= 2) = (2^-1.5 - 1001^-1.5) / (1 - 1001^-1.5)
        tail = (2 ** -1.5 - 1001 ** -1.5) / (1 - 1001 ** -1.5)
        assert np.mean(degrees >= 2) == pytest.approx(tail, abs=0.01)


class TestComponents:
    """Test connectivity helpers."""

    def test_largest_component(self, two_components):
        """Test that the triangle is kept and the edge is mapped out."""
        component, mapping = largest_connected_component(two_components)

        assert component.n == 3
        assert component.m == 3
        assert mapping.tolist() == [0, 1, 2, -1, -1]
        assert component.labels == ["0", "1", "2"]

    def test_connected_graph_returned_unchanged(self, path_graph):
        """Test that a connected graph is its own largest component."""
        component, mapping = largest_connected_component(path_graph)

        assert component is path_graph
        assert mapping.tolist() == [0, 1, 2, 3, 4]

    def test_tie_goes_to_smallest_id(self):
        """Test that equally large components resolve to the one holding the smallest id."""
        graph = Graph.from_edges(4, [(2, 3), (0, 1)])
        component, mapping = largest_connected_component(graph)

        assert mapping.tolist() == [0, 1, -1, -1]

    def test_components_match_networkx(self):
        """Test component sizes against networkx."""
        graph = generate_er(300, 0.006, seed=5)
        labels = component_labels(graph)
        ours = sorted(np.bincount(labels).tolist())
        theirs = sorted(len(c) for c in nx.connected_components(to_networkx(graph)))

        assert ours == theirs
