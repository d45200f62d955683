import math

import networkx as nx
import numpy as np
import pytest

from conftest import bowtie, complete, cycle, empty, path, star
from threshnet.metrics import (
    MetricsRow, avg_clustering, avg_path_length, edge_density, entropy_clustering, entropy_degree,
    entropy_path, heterogeneity_clustering, heterogeneity_degree, metrics_series, window_metrics,
)
from threshnet.netgraph import ThresholdGraph, distance_profile, threshold_graph
from threshnet.rolling import CorrMatrix


def test_edge_density():
    assert edge_density(complete(6)) == 1.0
    assert edge_density(empty(6)) == 0.0
    assert edge_density(path(4)) == 0.5
    with pytest.raises(ValueError):
        edge_density(empty(1))


def test_avg_clustering():
    assert avg_clustering(complete(5)) == 1.0
    # triangle 0-1-2 with pendant 3 on vertex 2: (1 + 1 + 1/3 + 0) / 4
    g = ThresholdGraph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert avg_clustering(g) == pytest.approx(7 / 12, abs=1e-15)
    assert avg_clustering(path(7)) == 0.0
    assert avg_clustering(star(5)) == 0.0


def test_avg_path_length():
    assert avg_path_length(distance_profile(complete(5))) == (1.0, 1.0)
    l, f = avg_path_length(distance_profile(path(3)))
    assert l == pytest.approx(4 / 3, abs=1e-15) and f == 1.0
    tri_plus_isolated = ThresholdGraph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert avg_path_length(distance_profile(tri_plus_isolated)) == (1.0, 0.5)
    l, f = avg_path_length(distance_profile(empty(3)))
    assert math.isnan(l) and f == 0.0


def test_heterogeneity_degree_endpoints():
    assert heterogeneity_degree(cycle(6)) == pytest.approx(0.0, abs=1e-15)
    for m in range(2, 21):
        assert heterogeneity_degree(star(m)) == pytest.approx(1.0, abs=1e-12)
    # oracle: mpmath direct evaluation
    assert heterogeneity_degree(path(4)) == pytest.approx(0.32015934382394774, abs=1e-14)
    with pytest.raises(ValueError):
        heterogeneity_degree(path(2))


def test_heterogeneity_clustering():
    assert heterogeneity_clustering(complete(5)) == (0.0, 0.0)
    v, skipped = heterogeneity_clustering(bowtie())
    # oracle: 4 (1 - sqrt 3)^2 / (5 - 2 sqrt 4)
    assert v == pytest.approx(2.1435935394489817, abs=1e-13)
    assert skipped == 0.0
    v, skipped = heterogeneity_clustering(path(5))
    assert v == 0.0 and skipped == 1.0


def test_entropy_degree():
    assert entropy_degree(cycle(7)) == 0.0
    assert entropy_degree(star(3)) == pytest.approx(0.56233514461880835, abs=1e-15)
    g = nx.havel_hakimi_graph([4, 4, 3, 3, 2, 2, 1, 1])
    tg = ThresholdGraph.from_edges(8, g.edges())
    assert entropy_degree(tg) == pytest.approx(math.log(4), abs=1e-15)


def test_entropy_degree_bound():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(3, 40))
        a = np.triu(rng.random((n, n)) < rng.random(), 1)
        g = ThresholdGraph.from_dense(a | a.T)
        k = (a | a.T).sum(axis=1)
        assert entropy_degree(g) <= math.log(len(set(k.tolist()))) + 1e-12


def test_entropy_clustering():
    assert entropy_clustering(complete(6)) == 0.0
    assert entropy_clustering(path(6)) == 0.0
    # bowtie: four vertices at c=1, one at 1/3 -> (0.8, 0.2)
    assert entropy_clustering(bowtie()) == pytest.approx(0.50040242353818788, abs=1e-15)


def test_entropy_path():
    assert entropy_path(distance_profile(complete(5))) == 0.0
    assert entropy_path(distance_profile(path(3))) == pytest.approx(0.63651416829481282, abs=1e-15)
    assert entropy_path(distance_profile(cycle(4))) == pytest.approx(0.63651416829481282, abs=1e-15)
    with pytest.raises(ValueError):
        entropy_path(distance_profile(empty(3)))


def _factor_corr(n, rho):
    W = np.full((n, n), rho)
    np.fill_diagonal(W, 1.0)
    return W


def test_metrics_series_shapes_and_monotone_construction():
    rng = np.random.default_rng(1)
    mats, graphs = [], []
    for k, rho in enumerate((0.1, 0.3, 0.5)):
        noise = rng.normal(scale=0.15, size=(12, 12))
        W = np.clip(_factor_corr(12, rho) + (noise + noise.T) / 2, -1, 1)
        np.fill_diagonal(W, 1.0)
        mats.append(CorrMatrix(W, window=k))
        graphs.append(threshold_graph(mats[-1], 0.3))
    rows = metrics_series(graphs, mats)
    assert [r.window for r in rows] == [0, 1, 2]
    e = [r.edge_density for r in rows]
    c = [r.avg_clustering for r in rows]
    assert e == sorted(e) and c == sorted(c)
    assert metrics_series(graphs[:1], mats[:1])[0] == rows[0]
    with pytest.raises(ValueError):
        metrics_series(graphs, mats[:2])


def test_window_metrics_on_empty_graph():
    W = CorrMatrix(np.eye(5))
    row = window_metrics(threshold_graph(W, 0.5), W)
    assert row.edge_density == 0.0 and math.isnan(row.avg_path_length) and math.isnan(row.S_l)
    assert row.connected_pair_fraction == 0.0
    assert MetricsRow.columns()[0] == "window"
