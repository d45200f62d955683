import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bowtie, complete, cycle, empty, path, star
from threshnet.netgraph import (
    ThresholdGraph, complement, degrees, distance_profile, local_clustering, threshold_graph, write_edge_list,
)
from threshnet.rolling import CorrMatrix

import oracles


def corr(offdiag):
    a, b, c = offdiag
    return CorrMatrix(np.array([[1, a, b], [a, 1, c], [b, c, 1]], dtype=float))


def random_corr(rng, n):
    x = rng.normal(size=(n, 3 * n))
    return CorrMatrix(np.clip(np.corrcoef(x), -1, 1))


def test_threshold_extremes():
    W = random_corr(np.random.default_rng(0), 8)
    assert threshold_graph(W, -1.0) == complete(8)
    assert threshold_graph(W, 1.0001) == empty(8)


def test_threshold_example():
    # w01 = 0.5, w02 = 0.2, w12 = 0.9 at theta 0.4
    g = threshold_graph(corr((0.5, 0.2, 0.9)), 0.4)
    assert g.edges() == [(0, 1), (1, 2)]


def test_ties_are_included():
    assert threshold_graph(corr((0.5, 0.2, 0.9)), 0.5).edges() == [(0, 1), (1, 2)]


def test_threshold_rejects_nan():
    with pytest.raises(ValueError):
        threshold_graph(corr((0.5, 0.2, 0.9)), float("nan"))


def test_graph_validation():
    with pytest.raises(ValueError):
        ThresholdGraph.from_dense(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        ThresholdGraph.from_edges(3, [(1, 1)])


def test_complement_examples():
    assert complement(complete(5)) == empty(5)
    assert complement(path(3)).edges() == [(0, 2)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 140), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_complement_involution_and_degrees(n, p, seed):
    rng = np.random.default_rng(seed)
    adj = np.triu(rng.random((n, n)) < p, 1)
    g = ThresholdGraph.from_dense(adj | adj.T)
    gc = complement(g)
    assert complement(gc) == g
    assert np.all(degrees(g) + degrees(gc) == n - 1)


def test_degrees():
    assert degrees(complete(4)).tolist() == [3, 3, 3, 3]
    assert degrees(star(3)).tolist() == [3, 1, 1, 1]
    rng = np.random.default_rng(5)
    adj = np.triu(rng.random((20, 20)) < 0.3, 1)
    adj = adj | adj.T
    assert np.array_equal(degrees(ThresholdGraph.from_dense(adj)), adj.sum(axis=1))
    assert degrees(ThresholdGraph.from_dense(adj)).sum() == 2 * ThresholdGraph.from_dense(adj).n_edges


def test_local_clustering_examples():
    assert local_clustering(complete(3)).tolist() == [1, 1, 1]
    assert local_clustering(path(3)).tolist() == [0, 0, 0]
    assert np.allclose(local_clustering(bowtie()), [1, 1, 1 / 3, 1, 1], atol=1e-15)
    assert local_clustering(complement(empty(5))).tolist() == [1.0] * 5


def test_local_clustering_random():
    rng = oracles.rng(25)
    for _ in range(20):
        edges = oracles.random_edges(25, rng.random(), rng)
        g = ThresholdGraph.from_edges(25, edges)
        assert np.allclose(local_clustering(g), oracles.local_clustering(25, edges), rtol=0, atol=1e-15)


def test_distance_profile_examples():
    p = distance_profile(complete(5))
    assert p.diameter == 1 and np.all(p.per_node() == [[1.0, 0.0]] * 5)

    p = distance_profile(path(3))
    assert p.diameter == 2
    assert p.per_node().tolist() == [[0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.5, 0.5, 0.0]]

    p = distance_profile(empty(2))
    assert p.diameter == 0 and p.per_node().tolist() == [[1.0], [1.0]]


def test_distance_profile_invariants():
    rng = oracles.rng(7)
    for _ in range(50):
        n, edges = oracles.random_graph(rng, 2, 30)
        p = distance_profile(ThresholdGraph.from_edges(n, edges))
        rows = p.per_node()
        assert np.allclose(rows.sum(axis=1), 1.0, rtol=0, atol=1e-12)
        assert np.allclose(p.aggregated(), rows.mean(axis=0), rtol=0, atol=1e-15)


def test_monotone_filtration():
    rng = np.random.default_rng(9)
    W = random_corr(rng, 30)
    counts = [threshold_graph(W, t).n_edges for t in np.linspace(-1, 1, 201)]
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_edge_list_export(tmp_path):
    write_edge_list(path(4), tmp_path / "e.txt")
    assert (tmp_path / "e.txt").read_text() == "0 1\n1 2\n2 3\n"
