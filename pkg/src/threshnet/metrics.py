"""Per-window network statistics.

Conventions where the textbook formulas are undefined:

* vertices of degree < 2 have clustering 0;
* path length averages over connected ordered pairs only, and the connected
  fraction is reported next to it;
* clustering heterogeneity skips edges with a zero-clustering endpoint and
  reports the skipped fraction;
* clustering entropy histograms values into ``bins`` equal right-closed bins on
  [0, 1] (the first bin also holds 0).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .dissim import entropy_rows, nnd
from .netgraph import (
    DistanceProfile,
    ThresholdGraph,
    clustering_from_counts,
    degrees,
    distance_profile,
    local_clustering,
    neighbour_edges,
)
from .rolling import CorrMatrix, avg_correlation

CLUSTERING_BINS = 20
NAN = float("nan")


def _need(n: int, at_least: int, what: str) -> None:
    if n < at_least:
        raise ValueError(f"{what} needs at least {at_least} vertices, got {n}")


def edge_density(g: ThresholdGraph) -> float:
    _need(g.n, 2, "edge density")
    return float(degrees(g).sum() / (g.n * (g.n - 1)))


def avg_clustering(g: ThresholdGraph) -> float:
    _need(g.n, 1, "average clustering")
    return float(local_clustering(g).mean())


def avg_path_length(profile: DistanceProfile) -> tuple[float, float]:
    """(mean distance over connected ordered pairs, connected fraction).

    The mean is NaN when no pair is connected.
    """
    n = profile.n
    _need(n, 2, "path length")
    pooled = profile.pooled_counts()
    connected = int(pooled.sum())
    if connected == 0:
        return NAN, 0.0
    total = int(np.dot(pooled, np.arange(1, pooled.size + 1)))
    return total / connected, connected / (n * (n - 1))


def _estrada(values: np.ndarray, g: ThresholdGraph, use: np.ndarray) -> float:
    n = g.n
    i, j = np.nonzero(np.triu(g.dense(), k=1))
    keep = use[i] & use[j]
    inv = np.zeros(n)
    inv[use] = values[use] ** -0.5
    s = np.sum((inv[i[keep]] - inv[j[keep]]) ** 2)
    return float(s / (n - 2.0 * math.sqrt(n - 1.0)))


def heterogeneity_degree(g: ThresholdGraph, k: np.ndarray | None = None) -> float:
    """Estrada's index: 0 on regular graphs, 1 on stars."""
    _need(g.n, 3, "degree heterogeneity")
    k = degrees(g) if k is None else k
    return _estrada(k.astype(np.float64), g, k > 0)


def heterogeneity_clustering(g: ThresholdGraph, c: np.ndarray | None = None) -> tuple[float, float]:
    """(index, fraction of edges skipped for a zero-clustering endpoint)."""
    _need(g.n, 3, "clustering heterogeneity")
    c = local_clustering(g) if c is None else c
    pos = c > 0
    value = _estrada(c, g, pos)
    i, j = np.nonzero(np.triu(g.dense(), k=1))
    skipped = float(np.mean(~(pos[i] & pos[j]))) if i.size else 0.0
    return value, skipped


def _entropy_of_labels(labels: np.ndarray) -> float:
    if labels.size == 0:
        return 0.0
    _, counts = np.unique(labels, return_counts=True)
    return float(entropy_rows(counts / labels.size))


def entropy_degree(g: ThresholdGraph, k: np.ndarray | None = None) -> float:
    k = degrees(g) if k is None else k
    return _entropy_of_labels(k)


def clustering_bin_index(k: np.ndarray, m: np.ndarray, bins: int = CLUSTERING_BINS) -> np.ndarray:
    """Right-closed bin of ``c = 2m / (k(k-1))`` computed on the integer fraction,
    so values on a bin edge land deterministically."""
    num = 2 * m.astype(np.int64)
    den = k.astype(np.int64) * (k.astype(np.int64) - 1)
    den = np.where(k >= 2, den, 1)
    num = np.where(k >= 2, num, 0)
    idx = (bins * num + den - 1) // den - 1
    return np.clip(idx, 0, bins - 1)


def entropy_clustering(g: ThresholdGraph, bins: int = CLUSTERING_BINS) -> float:
    return _entropy_of_labels(clustering_bin_index(degrees(g), neighbour_edges(g), bins))


def entropy_path(profile: DistanceProfile) -> float:
    _need(profile.n, 2, "path entropy")
    pooled = profile.pooled_counts()
    total = pooled.sum()
    if total == 0:
        raise ValueError("path entropy is undefined without connected pairs")
    return float(entropy_rows(pooled / total))


@dataclass(frozen=True)
class MetricsRow:
    window: int
    avg_corr: float
    edge_density: float
    avg_clustering: float
    avg_path_length: float
    connected_pair_fraction: float
    H_k: float
    H_c: float
    H_c_skipped_fraction: float
    H_l: float
    S_k: float
    S_c: float
    S_l: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


def window_metrics(g: ThresholdGraph, W: CorrMatrix, bins: int = CLUSTERING_BINS) -> MetricsRow:
    _need(g.n, 3, "window metrics")
    k = degrees(g)
    m = neighbour_edges(g)
    c = clustering_from_counts(k, m)
    profile = distance_profile(g)
    l, frac = avg_path_length(profile)
    h_c, skipped = heterogeneity_clustering(g, c)
    return MetricsRow(
        window=W.window,
        avg_corr=avg_correlation(W),
        edge_density=float(k.sum() / (g.n * (g.n - 1))),
        avg_clustering=float(c.mean()),
        avg_path_length=l,
        connected_pair_fraction=frac,
        H_k=heterogeneity_degree(g, k),
        H_c=h_c,
        H_c_skipped_fraction=skipped,
        H_l=nnd(profile),
        S_k=entropy_degree(g, k),
        S_c=_entropy_of_labels(clustering_bin_index(k, m, bins)),
        S_l=entropy_path(profile) if frac > 0 else NAN,
    )


def metrics_series(graphs: Sequence[ThresholdGraph], mats: Sequence[CorrMatrix], bins: int = CLUSTERING_BINS) -> list[MetricsRow]:
    if len(graphs) != len(mats):
        raise ValueError(f"length mismatch: {len(graphs)} graphs vs {len(mats)} matrices")
    rows = []
    for g, W in zip(graphs, mats):
        if g.window != W.window:
            raise ValueError(f"window mismatch: graph {g.window} vs matrix {W.window}")
        rows.append(window_metrics(g, W, bins))
    return rows
