import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, empty, path, star
from threshnet.dissim import (
    DissimWeights, centrality_distribution, d_measure, d_terms, jsd, nnd, shannon_entropy, summarize,
)
from threshnet.netgraph import ThresholdGraph, distance_profile

import oracles


def test_entropy_examples():
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    # oracle: mpmath
    assert shannon_entropy([0.75, 0.25]) == pytest.approx(0.56233514461880835, abs=1e-15)


@pytest.mark.parametrize("bad", [[0.5, 0.6], [-0.1, 1.1], [], [[0.5, 0.5]], [float("nan"), 1.0]])
def test_entropy_rejects_invalid(bad):
    with pytest.raises(ValueError):
        shannon_entropy(bad)


def test_jsd_examples():
    assert jsd([[0.2, 0.8], [0.2, 0.8], [0.2, 0.8]]) == pytest.approx(0.0, abs=1e-15)
    assert jsd([[1, 0], [0, 1]]) == pytest.approx(math.log(2), abs=1e-15)
    assert jsd([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == pytest.approx(math.log(3), abs=1e-15)
    # shorter supports are padded at the end
    assert jsd([[1.0], [0.0, 1.0]]) == pytest.approx(math.log(2), abs=1e-15)
    with pytest.raises(ValueError):
        jsd([[1.0]])


dist = st.lists(st.floats(0, 1), min_size=1, max_size=12).filter(lambda v: sum(v) > 1e-3).map(
    lambda v: [x / sum(v) for x in v]).filter(lambda v: abs(sum(v) - 1) <= 1e-12)


@settings(max_examples=200, deadline=None)
@given(dist, dist)
def test_jsd_bounds(p, q):
    v = jsd([p, q])
    assert 0.0 <= v <= math.log(2) + 1e-12
    assert v == pytest.approx(jsd([q, p]), abs=1e-15)


def test_nnd_examples():
    assert nnd(distance_profile(complete(6))) == 0.0
    assert nnd(distance_profile(empty(4))) == 0.0
    # oracle: Floyd-Warshall distributions and direct evaluation
    assert nnd(distance_profile(star(4))) == pytest.approx(0.20311401357501238, abs=1e-14)
    v = nnd(distance_profile(path(4)))
    assert v == pytest.approx(0.10375937481971091, abs=1e-14) and v > 0


def test_nnd_random_bounds_and_oracle():
    rng = oracles.rng(3)
    for _ in range(200):
        n, edges = oracles.random_graph(rng, 2, 50)
        v = nnd(distance_profile(ThresholdGraph.from_edges(n, edges)))
        assert -1e-9 <= v <= 1 + 1e-9
        if n <= 20:
            assert v == pytest.approx(oracles.nnd(n, edges), abs=1e-12)


def test_centrality_examples():
    assert centrality_distribution(complete(5)).tolist() == [0, 0, 0, 0, 1]
    assert centrality_distribution(empty(5)).tolist() == [1, 0, 0, 0, 0]
    # K_{1,3}: centralities (1, 1/3, 1/3, 1/3) on 4 bins
    assert centrality_distribution(star(3)).tolist() == [0, 0.75, 0, 0.25]


def test_d_measure_examples():
    g = path(6)
    assert d_measure(g, g) == 0.0
    # oracle: term-by-term straight-line evaluation; distance and both centrality JSDs are disjoint
    assert d_measure(complete(5), empty(5)) == pytest.approx(0.55, abs=1e-15)
    assert d_terms(summarize(complete(5)), summarize(empty(5))) == pytest.approx((1.0, 0.0, 1.0), abs=1e-15)
    with pytest.raises(ValueError):
        d_measure(path(4), path(5))


def test_weights_validation():
    with pytest.raises(ValueError):
        DissimWeights(0.5, 0.5, 0.1)
    with pytest.raises(ValueError):
        DissimWeights(1.1, -0.1, 0.0)


def test_relabeling_invariance():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(3, 30))
        a = np.triu(rng.random((n, n)) < rng.random(), 1)
        b = np.triu(rng.random((n, n)) < rng.random(), 1)
        a, b = a | a.T, b | b.T
        perm = rng.permutation(n)
        d0 = d_measure(ThresholdGraph.from_dense(a), ThresholdGraph.from_dense(b))
        d1 = d_measure(ThresholdGraph.from_dense(a[np.ix_(perm, perm)]), ThresholdGraph.from_dense(b[np.ix_(perm, perm)]))
        assert abs(d0 - d1) <= 1e-12
