"""Graph dissimilarity from distance, dispersion and centrality distributions.

The centrality distribution is the one imported convention here: each vertex's
centrality is ``degree / (n - 1)``, histogrammed into ``n`` equal bins on
``[0, 1]``. Natural logarithms are used throughout; the ``ln 2`` normalisation
of the pairwise divergences makes the base irrelevant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .netgraph import DistanceProfile, ThresholdGraph, degrees, distance_profile

LN2 = math.log(2.0)


@dataclass(frozen=True)
class DissimWeights:
    alpha: float = 0.45
    beta: float = 0.45
    gamma: float = 0.10

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("dissimilarity weights must be nonnegative")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.alpha + self.beta + self.gamma!r}")


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("a distribution must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def entropy_rows(p: np.ndarray) -> np.ndarray:
    """Shannon entropy along the last axis, ``0 ln 0 = 0``. No validation."""
    p = np.asarray(p, dtype=np.float64)
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(p * np.log(safe), axis=-1)


def shannon_entropy(p) -> float:
    return float(entropy_rows(_check_distribution(p)))


def _jsd_unchecked(rows: np.ndarray) -> float:
    mix = rows.sum(axis=0) / rows.shape[0]
    value = float(entropy_rows(mix) - entropy_rows(rows).sum() / rows.shape[0])
    return max(value, 0.0)


def jsd(ps: Sequence) -> float:
    """Jensen-Shannon divergence of ``m >= 2`` distributions.

    Shorter supports are zero-padded at the end.
    """
    if len(ps) < 2:
        raise ValueError("jsd needs at least two distributions")
    arrays = [_check_distribution(p) for p in ps]
    width = max(a.size for a in arrays)
    rows = np.zeros((len(arrays), width))
    for r, a in zip(rows, arrays):
        r[:a.size] = a
    return _jsd_unchecked(rows)


def nnd(profile: DistanceProfile) -> float:
    """Network node dispersion: JSD of per-node distance distributions over ``ln(diameter + 1)``."""
    if profile.n < 2:
        raise ValueError("node dispersion needs at least 2 vertices")
    rows = profile.per_node()
    if profile.diameter == 0 or np.all(rows == rows[0]):
        return 0.0
    return _jsd_unchecked(rows) / math.log(profile.diameter + 1)


def centrality_bins(k: np.ndarray, n: int) -> np.ndarray:
    """Bin index of ``k / (n - 1)`` among ``n`` equal bins on [0, 1], in exact integer arithmetic."""
    return np.minimum((k * n) // (n - 1), n - 1)


def centrality_counts(k: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(centrality_bins(np.asarray(k, dtype=np.int64), n), minlength=n)


def centrality_distribution(g: ThresholdGraph) -> np.ndarray:
    if g.n < 2:
        raise ValueError("centrality distribution needs at least 2 vertices")
    return centrality_counts(degrees(g), g.n) / g.n


@dataclass(frozen=True)
class GraphSummary:
    """Everything the dissimilarity needs from one graph, computed once."""

    n: int
    distance: np.ndarray  # aggregated distance distribution, unreachable bin last
    dispersion: float
    centrality: np.ndarray
    complement_centrality: np.ndarray

    @property
    def diameter(self) -> int:
        return self.distance.size - 1


def summarize(g: ThresholdGraph, profile: DistanceProfile | None = None, k: np.ndarray | None = None) -> GraphSummary:
    if g.n < 2:
        raise ValueError("dissimilarity needs at least 2 vertices")
    profile = distance_profile(g) if profile is None else profile
    k = degrees(g) if k is None else k
    return GraphSummary(
        n=g.n,
        distance=profile.aggregated(),
        dispersion=nnd(profile),
        centrality=centrality_counts(k, g.n) / g.n,
        # complement degree is n - 1 - k; no second BFS needed
        complement_centrality=centrality_counts(g.n - 1 - k, g.n) / g.n,
    )


def _align_distance(p: np.ndarray, diameter: int) -> np.ndarray:
    out = np.zeros(diameter + 1)
    out[:p.size - 1] = p[:-1]
    out[-1] = p[-1]
    return out


def _root_jsd2(p: np.ndarray, q: np.ndarray) -> float:
    return math.sqrt(_jsd_unchecked(np.vstack([p, q])) / LN2)


def d_terms(a: GraphSummary, b: GraphSummary) -> tuple[float, float, float]:
    """Unweighted (distance, dispersion, centrality) terms."""
    if a.n != b.n:
        raise ValueError(f"vertex-count mismatch: {a.n} vs {b.n}")
    lam = max(a.diameter, b.diameter)
    distance = _root_jsd2(_align_distance(a.distance, lam), _align_distance(b.distance, lam))
    dispersion = abs(math.sqrt(a.dispersion) - math.sqrt(b.dispersion))
    centrality = 0.5 * (
        _root_jsd2(a.centrality, b.centrality)
        + _root_jsd2(a.complement_centrality, b.complement_centrality)
    )
    return distance, dispersion, centrality


def combine(terms: tuple[float, float, float], w: DissimWeights) -> float:
    return w.alpha * terms[0] + w.beta * terms[1] + w.gamma * terms[2]


def d_measure(g1: ThresholdGraph | GraphSummary, g2: ThresholdGraph | GraphSummary, w: DissimWeights = DissimWeights()) -> float:
    if isinstance(g1, ThresholdGraph) and isinstance(g2, ThresholdGraph) and g1.n != g2.n:
        raise ValueError(f"vertex-count mismatch: {g1.n} vs {g2.n}")
    a = g1 if isinstance(g1, GraphSummary) else summarize(g1)
    b = g2 if isinstance(g2, GraphSummary) else summarize(g2)
    return combine(d_terms(a, b), w)
