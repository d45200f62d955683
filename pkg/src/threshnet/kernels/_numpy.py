"""Pure-numpy graph kernels.

All-pairs BFS runs every source at once as boolean frontier expansion through a
dense 0/1 matmul, so each level costs one ``n x n`` BLAS product.
"""

import numpy as np


def unpack(bits: np.ndarray, n: int) -> np.ndarray:
    """Packed ``uint64`` rows -> dense ``(n, n)`` bool adjacency."""
    raw = np.ascontiguousarray(bits).view(np.uint8)
    return np.unpackbits(raw, axis=1, count=n, bitorder="little").astype(bool)


def row_popcounts(bits: np.ndarray, n: int) -> np.ndarray:
    return unpack(bits, n).sum(axis=1, dtype=np.int64)


def triangle_counts(bits: np.ndarray, n: int) -> np.ndarray:
    """Number of edges among the neighbours of each vertex."""
    a = unpack(bits, n).astype(np.float64)
    # entries are small integers, exact in float64
    paths2 = a @ a
    return np.rint((paths2 * a).sum(axis=1) / 2.0).astype(np.int64)


def bfs_distance_counts(bits: np.ndarray, n: int) -> np.ndarray:
    """``counts[s, d]`` = vertices at distance ``d >= 1`` from ``s``; column 0 = unreachable."""
    counts = np.zeros((n, n), dtype=np.int64)
    if n == 0:
        return counts
    adj = unpack(bits, n).astype(np.float32)
    reached = np.eye(n, dtype=bool)
    frontier = reached.astype(np.float32)
    d = 0
    while True:
        d += 1
        nxt = ((frontier @ adj) > 0.5) & ~reached
        level = nxt.sum(axis=1, dtype=np.int64)
        if not level.any():
            break
        counts[:, d] = level
        reached |= nxt
        frontier = nxt.astype(np.float32)
    counts[:, 0] = n - reached.sum(axis=1, dtype=np.int64)
    return counts
