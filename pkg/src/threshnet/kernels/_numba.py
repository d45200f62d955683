"""numba kernels over packed bitset adjacency.

BFS sweeps whole frontier words: the next level is the OR of the adjacency rows
of every frontier vertex, masked by the visited set, so a dense graph costs
``O(n * words)`` per source instead of ``O(n^2)``.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, nogil=True)
def row_popcounts(bits, n):
    words = bits.shape[1]
    out = np.zeros(n, np.int64)
    for i in range(n):
        c = 0
        for k in range(words):
            c += _popcount(bits[i, k])
        out[i] = c
    return out


@njit(cache=True, nogil=True)
def triangle_counts(bits, n):
    words = bits.shape[1]
    out = np.zeros(n, np.int64)
    for i in range(n):
        twice = 0
        for w in range(words):
            x = bits[i, w]
            while x != 0:
                low = x & (~x + _ONE)
                j = (w << 6) + _popcount(low - _ONE)
                for k in range(words):
                    twice += _popcount(bits[i, k] & bits[j, k])
                x ^= low
        out[i] = twice // 2
    return out


@njit(cache=True, nogil=True)
def bfs_distance_counts(bits, n):
    words = bits.shape[1]
    counts = np.zeros((n, n), np.int64)
    visited = np.empty(words, np.uint64)
    frontier = np.empty(words, np.uint64)
    nxt = np.empty(words, np.uint64)
    for s in range(n):
        visited[:] = 0
        frontier[:] = 0
        sbit = _ONE << np.uint64(s & 63)
        visited[s >> 6] = sbit
        frontier[s >> 6] = sbit
        reached = 1
        d = 0
        while True:
            d += 1
            nxt[:] = 0
            for w in range(words):
                x = frontier[w]
                while x != 0:
                    low = x & (~x + _ONE)
                    v = (w << 6) + _popcount(low - _ONE)
                    for k in range(words):
                        nxt[k] |= bits[v, k]
                    x ^= low
            c = 0
            for k in range(words):
                nxt[k] &= ~visited[k]
                c += _popcount(nxt[k])
            if c == 0:
                break
            counts[s, d] = c
            reached += c
            for k in range(words):
                visited[k] |= nxt[k]
                frontier[k] = nxt[k]
        counts[s, 0] = n - reached
    return counts
