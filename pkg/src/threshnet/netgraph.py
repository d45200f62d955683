"""Threshold graphs over packed bitset adjacency, and their core statistics."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from . import kernels
from .rolling import CorrMatrix


def _words(n: int) -> int:
    return max(1, (n + 63) // 64)


def pack_rows(adj: np.ndarray) -> np.ndarray:
    """Dense ``(n, n)`` bool adjacency -> ``(n, words)`` uint64 bit rows."""
    n = adj.shape[0]
    raw = np.packbits(adj.astype(bool), axis=1, bitorder="little")
    buf = np.zeros((n, _words(n) * 8), dtype=np.uint8)
    buf[:, :raw.shape[1]] = raw
    return buf.view("<u8").astype(np.uint64, copy=False)


@dataclass(frozen=True, eq=False)
class ThresholdGraph:
    n: int
    bits: np.ndarray
    theta: float = float("nan")
    window: int = 0

    def __post_init__(self):
        if self.bits.shape != (self.n, _words(self.n)) or self.bits.dtype != np.uint64:
            raise ValueError(f"bits must be uint64 with shape ({self.n}, {_words(self.n)})")
        self.bits.setflags(write=False)

    @classmethod
    def from_dense(cls, adj: np.ndarray, theta: float = float("nan"), window: int = 0) -> "ThresholdGraph":
        adj = np.array(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        np.fill_diagonal(adj, False)
        return cls(adj.shape[0], pack_rows(adj), theta, window)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "ThresholdGraph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            adj[i, j] = adj[j, i] = True
        return cls.from_dense(adj, **kw)

    def dense(self) -> np.ndarray:
        return kernels._numpy.unpack(self.bits, self.n)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.dense(), k=1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def n_edges(self) -> int:
        return int(degrees(self).sum()) // 2

    def __eq__(self, other):
        if not isinstance(other, ThresholdGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    __hash__ = None


def threshold_graph(W: CorrMatrix, theta: float) -> ThresholdGraph:
    """Edge ``(i, j)`` iff ``w_ij >= theta``; ties at ``theta`` are included."""
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    adj = W.values >= theta
    np.fill_diagonal(adj, False)
    return ThresholdGraph(W.n, pack_rows(adj), float(theta), W.window)


def complement(g: ThresholdGraph) -> ThresholdGraph:
    # the mask clears self-loops and padding bits past n
    mask = pack_rows(~np.eye(g.n, dtype=bool))
    return ThresholdGraph(g.n, ~g.bits & mask, g.theta, g.window)


def degrees(g: ThresholdGraph) -> np.ndarray:
    return kernels.row_popcounts(g.bits, g.n)


def neighbour_edges(g: ThresholdGraph) -> np.ndarray:
    """``m_i``: number of edges among the neighbours of each vertex."""
    return kernels.triangle_counts(g.bits, g.n)


def clustering_from_counts(k: np.ndarray, m: np.ndarray) -> np.ndarray:
    c = np.zeros(k.shape[0])
    ok = k >= 2
    c[ok] = 2.0 * m[ok] / (k[ok] * (k[ok] - 1.0))
    return c


def local_clustering(g: ThresholdGraph) -> np.ndarray:
    """``c_i = 2 m_i / (k_i (k_i - 1))``; vertices of degree < 2 get 0."""
    return clustering_from_counts(degrees(g), neighbour_edges(g))


@dataclass(frozen=True)
class DistanceProfile:
    """Shortest-path-length distributions of every vertex.

    ``counts[i, d - 1]`` is the number of vertices at distance ``d`` from ``i``
    for ``d = 1..diameter``; ``unreachable[i]`` counts the rest.
    """

    n: int
    counts: np.ndarray  # (n, diameter) int64
    unreachable: np.ndarray  # (n,) int64

    @classmethod
    def from_bfs_counts(cls, raw: np.ndarray) -> "DistanceProfile":
        n = raw.shape[0]
        occupied = np.flatnonzero(raw[:, 1:].any(axis=0))
        diameter = int(occupied[-1]) + 1 if occupied.size else 0
        return cls(n, raw[:, 1:diameter + 1].copy(), raw[:, 0].copy())

    @property
    def diameter(self) -> int:
        return self.counts.shape[1]

    def per_node(self) -> np.ndarray:
        """``(n, diameter + 1)`` rows: distances 1..diameter, then the unreachable bin."""
        if self.n < 2:
            return np.zeros((self.n, self.diameter + 1))
        full = np.concatenate([self.counts, self.unreachable[:, None]], axis=1)
        return full / (self.n - 1)

    def aggregated(self) -> np.ndarray:
        return self.per_node().mean(axis=0)

    def pooled_counts(self) -> np.ndarray:
        """Ordered-pair counts at each finite distance 1..diameter."""
        return self.counts.sum(axis=0)


def distance_profile(g: ThresholdGraph) -> DistanceProfile:
    return DistanceProfile.from_bfs_counts(kernels.bfs_distance_counts(g.bits, g.n))


def write_edge_list(g: ThresholdGraph, path: str | Path) -> None:
    """One ``i j`` line per edge, 0-based, ``i < j``, lexicographic order."""
    Path(path).write_text("".join(f"{i} {j}\n" for i, j in g.edges()), encoding="utf-8")
