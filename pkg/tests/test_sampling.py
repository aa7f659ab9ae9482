"""Tests for sampling-based degree rank estimation."""

import numpy as np
import pytest
from scipy import stats

from globalrank import RankEstimator
from globalrank.access import GlobalAccess, LocalAccess
from globalrank.exceptions import DomainError, ParameterError
from globalrank.graph import Graph, generate_er, largest_connected_component
from globalrank.oracles import degree_rank
from globalrank.params import GroundTruthParameters
from globalrank.estimators.sampling import (
    Sample,
    estimate_degree_rank_mh,
    estimate_degree_rank_rw,
    estimate_degree_rank_us,
    extrapolate,
    local_rank,
    local_ranks,
    mh_walk,
    reweight,
    rw_walk,
    sample_size,
    sample_uniform,
)


def make_sample(nodes, degrees, method="US"):
    return Sample(nodes=np.array(nodes, dtype=np.int64),
                  degrees=np.array(degrees, dtype=np.int64), method=method)


class TestSampleSize:
    """Test the sample fraction to size conversion."""

    def test_values(self):
        """Test ceil(frac * n) without float noise."""
        assert sample_size(0.01, 10000) == 100
        assert sample_size(0.01, 50000) == 500
        assert sample_size(0.01, 150) == 2
        assert sample_size(1.0, 37) == 37

    def test_invalid_fraction(self):
        """Test fractions outside (0, 1]."""
        with pytest.raises(ParameterError):
            sample_size(0.0, 100)
        with pytest.raises(ParameterError):
            sample_size(1.5, 100)


class TestUniformSampling:
    """Test uniform sampling without replacement."""

    def test_full_sample(self, path_graph):
        """Test that s = n returns every node once."""
        sample = sample_uniform(GlobalAccess(path_graph), 5, np.random.default_rng(0))

        assert sorted(sample.nodes.tolist()) == [0, 1, 2, 3, 4]
        assert sample.method == "US"

    def test_too_large(self, path_graph):
        """Test that s > n is rejected."""
        with pytest.raises(ParameterError):
            sample_uniform(GlobalAccess(path_graph), 6, np.random.default_rng(0))

    def test_single_draw_is_uniform(self):
        """Test the distribution of one-node samples with a chi-square test."""
        graph = Graph.from_edges(10, [(i, (i + 1) % 10) for i in range(10)])
        access = GlobalAccess(graph)
        rng = np.random.default_rng(2024)
        counts = np.zeros(10)
        for _ in range(100000):
            counts[sample_uniform(access, 1, rng).nodes[0]] += 1

        assert stats.chisquare(counts).pvalue > 0.001

    def test_deterministic(self, ba_2000):
        """Test that a fixed seed gives the same sample."""
        a = sample_uniform(GlobalAccess(ba_2000), 50, np.random.default_rng(9))
        b = sample_uniform(GlobalAccess(ba_2000), 50, np.random.default_rng(9))

        assert a.nodes.tolist() == b.nodes.tolist()


class TestLocalRank:
    """Test ranks inside a sample."""

    def test_one_greater(self):
        """Test that only strictly greater degrees count."""
        sample = make_sample([10, 11, 12, 13], [5, 3, 3, 1])

        assert local_rank(sample, 99, 3) == 2

    def test_empty(self):
        """Test the empty sample."""
        assert local_rank(make_sample([], []), 0, 4) == 1

    def test_self_entries_excluded(self):
        """Test that entries for the interested node itself never count."""
        sample = make_sample([7, 7, 8], [4, 4, 9])

        assert local_rank(sample, 7, 4) == 2

    def test_vectorized_matches_scalar(self):
        """Test local_ranks against local_rank for many degrees."""
        rng = np.random.default_rng(1)
        sample = make_sample(rng.integers(0, 100, 40), rng.integers(1, 20, 40))
        degrees = np.arange(0, 22)

        expected = [local_rank(sample, -1, int(d)) for d in degrees]
        assert local_ranks(sample, degrees).tolist() == expected

    def test_fixed_sample_monotone_in_degree(self, ba_2000):
        """Test that on one sample a higher degree never gets a worse estimate."""
        sample = sample_uniform(GlobalAccess(ba_2000), 20, np.random.default_rng(9))
        nodes = np.random.default_rng(10).choice(ba_2000.n, 300, replace=False)
        degrees = ba_2000.degrees[nodes]
        estimates = np.array([
            extrapolate(local_rank(sample, int(u), int(d)), ba_2000.n, sample.s)
            for u, d in zip(nodes, degrees)
        ])

        higher, lower = np.nonzero(degrees[:, None] >= degrees[None, :])
        assert np.all(estimates[higher] <= estimates[lower])
        assert len(set(estimates.tolist())) > 1


class TestExtrapolate:
    """Test scaling a local rank to the network."""

    def test_values(self):
        """Test (n / s) * r_local and both clamp boundaries."""
        assert extrapolate(3, 1000, 10) == 300.0
        assert extrapolate(1, 1000, 1000) == 1.0
        assert extrapolate(10, 1000, 10) == 1000.0
        assert extrapolate(11, 1000, 10) == 1000.0

    def test_array(self):
        """Test the array form."""
        assert extrapolate(np.array([1, 2, 3]), 100, 10).tolist() == [10.0, 20.0, 30.0]

    def test_empty_sample(self):
        """Test that s = 0 is rejected."""
        with pytest.raises(DomainError):
            extrapolate(1, 1000, 0)


class TestMetropolisHastings:
    """Test the Metropolis-Hastings walk."""

    def test_transition_probabilities(self):
        """Test min(1, d_u / d_v) acceptance from a degree-2 node."""
        # 0 has neighbors 1 (degree 1) and 2 (degree 4)
        graph = Graph.from_edges(6, [(0, 1), (0, 2), (2, 3), (2, 4), (2, 5)])
        access = LocalAccess(graph)
        rng = np.random.default_rng(5)
        trials = 40000
        moves = np.zeros(6)
        for _ in range(trials):
            moves[mh_walk(access, 0, 2, 0, rng).nodes[1]] += 1
        freq = moves / trials

        assert freq[1] == pytest.approx(0.5, abs=0.015)
        assert freq[2] == pytest.approx(0.25, abs=0.015)
        assert freq[0] == pytest.approx(0.25, abs=0.015)

    def test_regular_graph_never_stays(self):
        """Test that every proposal is accepted on a cycle."""
        cycle = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
        sample = mh_walk(LocalAccess(cycle), 0, 500, 0, np.random.default_rng(3))

        assert np.all(sample.nodes[1:] != sample.nodes[:-1])

    def test_stationary_distribution_is_uniform(self):
        """Test visit frequencies of a long walk against the uniform distribution."""
        graph, _ = largest_connected_component(generate_er(50, 0.2, seed=3))
        sample = mh_walk(LocalAccess(graph), 0, 1000000, 100, np.random.default_rng(17))
        freq = np.bincount(sample.nodes, minlength=graph.n) / sample.s
        total_variation = 0.5 * np.abs(freq - 1.0 / graph.n).sum()

        assert total_variation <= 0.02

    def test_isolated_start(self):
        """Test that a walk cannot start at an isolated node."""
        graph = Graph.from_edges(3, [(0, 1)])

        with pytest.raises(DomainError):
            mh_walk(LocalAccess(graph), 2, 10, 0, np.random.default_rng(0))

    def test_local_capabilities_only(self, ba_2000):
        """Test that a walk-based estimate never asks for a random node."""
        access = LocalAccess(ba_2000)
        result = estimate_degree_rank_mh(
            access, 3, 0.01, np.random.default_rng(1), params=GroundTruthParameters(ba_2000)
        )

        assert not hasattr(access, "random_node")
        assert set(access.counters) == {"degree", "neighbors", "random_neighbor"}
        assert access.counters["random_neighbor"] > 0
        assert 1.0 <= result.value <= ba_2000.n

    @pytest.mark.parametrize("estimate", [estimate_degree_rank_mh, estimate_degree_rank_rw])
    def test_global_capabilities_unused(self, ba_2000, estimate):
        """Test that walks ignore uniform node sampling even when it is offered."""
        access = GlobalAccess(ba_2000)
        result = estimate(access, 3, 0.01, np.random.default_rng(1),
                          params=GroundTruthParameters(ba_2000))

        assert access.counters["random_node"] == 0
        assert access.counters["node_count"] == 0
        assert access.counters["random_neighbor"] > 0
        assert 1.0 <= result.value <= ba_2000.n

    def test_needs_network_size(self, ba_2000):
        """Test that walk estimates need n from a parameter source."""
        with pytest.raises(ParameterError):
            estimate_degree_rank_mh(LocalAccess(ba_2000), 3, 0.01, np.random.default_rng(1))


class TestRandomWalk:
    """Test the simple random walk and re-weighting."""

    def test_single_edge_alternates(self):
        """Test that a walk on one edge alternates endpoints."""
        graph = Graph.from_edges(2, [(0, 1)])
        sample = rw_walk(LocalAccess(graph), 0, 10, 0, np.random.default_rng(0))

        assert sample.nodes.tolist() == [0, 1] * 5

    def test_star_center_frequency(self):
        """Test that the star center holds half the visits."""
        star = Graph.from_edges(5, [(0, v) for v in range(1, 5)])
        sample = rw_walk(LocalAccess(star), 1, 100000, 0, np.random.default_rng(0))

        assert np.mean(sample.nodes == 0) == pytest.approx(0.5, abs=1e-4)

    def test_deterministic(self, ba_2000):
        """Test that a fixed seed gives the same walk."""
        a = rw_walk(LocalAccess(ba_2000), 0, 300, 10, np.random.default_rng(4))
        b = rw_walk(LocalAccess(ba_2000), 0, 300, 10, np.random.default_rng(4))

        assert a.nodes.tolist() == b.nodes.tolist()

    def test_reweight_probabilities(self):
        """Test resampling with probability proportional to 1 / degree."""
        sample = make_sample([0, 1], [1, 3], method="RW")
        out = reweight(sample, np.random.default_rng(0), s_out=100000)

        assert out.s == 100000
        assert out.method == "RW-reweighted"
        assert np.mean(out.nodes == 0) == pytest.approx(0.75, abs=0.01)

    def test_reweight_empty(self):
        """Test that an empty sample cannot be re-weighted."""
        with pytest.raises(DomainError):
            reweight(make_sample([], []), np.random.default_rng(0))

    def test_reweighted_degrees_match_graph(self, ba_10000):
        """Test the re-weighted walk's degree distribution with a KS statistic."""
        rng = np.random.default_rng(1)
        walk = rw_walk(LocalAccess(ba_10000), 0, 50000, 100, rng)
        sample = reweight(walk, rng, s_out=50000)
        ks = stats.ks_2samp(sample.degrees, ba_10000.degrees).statistic

        assert ks <= 0.05

    def test_estimate_on_star(self, star_graph):
        """Test that the hub is estimated first from a re-weighted walk."""
        params = GroundTruthParameters(star_graph)
        hub = estimate_degree_rank_rw(LocalAccess(star_graph), 0, 1.0,
                                      np.random.default_rng(2), params=params, burn_in=0)
        leaf = estimate_degree_rank_rw(LocalAccess(star_graph), 3, 1.0,
                                       np.random.default_rng(2), params=params, start=0)

        assert hub.value == 1.0
        assert hub.method == "rw"
        assert 1.0 <= leaf.value <= 6.0


class TestSamplingEstimator:
    """Test sampling methods through RankEstimator."""

    def test_full_census_is_exact(self, ba_2000):
        """Test that a uniform sample of every node gives the exact rank."""
        access = GlobalAccess(ba_2000)
        for u in (0, 10, 500, 1999):
            result = estimate_degree_rank_us(access, u, 1.0, np.random.default_rng(u))
            assert result.value == degree_rank(ba_2000, u).rank

    @pytest.mark.parametrize("method", ["us", "mh", "rw"])
    def test_range_and_determinism(self, ba_2000, method):
        """Test that estimates lie in [1, n] and repeat for a fixed seed."""
        estimator = RankEstimator(ba_2000, seed=11)
        first = estimator.estimate(25, method)
        second = estimator.estimate(25, method)

        assert 1.0 <= first.value <= ba_2000.n
        assert first.value == second.value
        assert first.method == method
        assert first.sample_frac == 0.01

    @pytest.mark.parametrize("method", ["us", "mh", "rw"])
    def test_regular_graph_same_estimate(self, method):
        """Test that every node of a cycle gets the same estimate."""
        cycle = Graph.from_edges(200, [(i, (i + 1) % 200) for i in range(200)])
        estimator = RankEstimator(cycle, sample_frac=0.05, seed=3)
        values = {estimator.estimate(u, method).value for u in range(0, 200, 20)}

        # s = 10 and nothing is strictly greater, so every estimate is 200 / 10
        assert values == {20.0}

    def test_unknown_method(self, ba_2000):
        """Test that unknown methods are rejected."""
        with pytest.raises(ParameterError):
            RankEstimator(ba_2000).estimate(0, "bfs")
