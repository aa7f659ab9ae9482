"""Shared graphs for the test suite."""

import pytest

from globalrank.graph import Graph, generate_ba


@pytest.fixture(scope="session")
def ba_10000():
    return generate_ba(10000, 5, seed=1)


@pytest.fixture(scope="session")
def ba_2000():
    return generate_ba(2000, 5, seed=1)


@pytest.fixture
def path_graph():
    """0 - 1 - 2 - 3 - 4"""
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def star_graph():
    """Node 0 joined to 1..5."""
    return Graph.from_edges(6, [(0, v) for v in range(1, 6)])


@pytest.fixture
def two_components():
    """Triangle 0-1-2 plus the edge 3-4."""
    return Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
