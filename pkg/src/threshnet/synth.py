"""Deterministic synthetic market with switchable common-factor regimes.

Returns follow a one-factor model::

    r_i(t) = vol * (L(t) * f(t) + sqrt(1 - L(t)^2) * e_i(t))

with ``f`` and ``e_i`` independent standard normals and ``L(t)`` the loading of
the regime active on day ``t``. Pairwise return correlation is ``L(t)^2`` while
every instrument keeps daily volatility ``vol``.

Random numbers come from SplitMix64 (Steele, Lea and Flood 2014) used as a
counter-based stream so any language can reproduce it:

* draw ``k`` of a stream with seed ``s`` is ``mix(s + (k + 1) * 0x9E3779B97F4A7C15 mod 2^64)``
* ``mix(z)``: ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2^64)
* a uniform on (0, 1] is ``((x >> 11) + 1) * 2^-53``
* normals use Box-Muller on consecutive draw pairs ``(u1, u2)`` taking only the
  cosine branch: ``sqrt(-2 ln u1) * cos(2 pi u2)``

Normal number ``j`` consumes draws ``2j`` and ``2j + 1``. The factor takes
normals ``0 .. T-2``; instrument ``i`` then takes the next ``T - 1`` normals in
instrument order. Day ``t`` of the returns drives the price move from date
``t`` to ``t + 1``; prices start at 100 on 2000-01-03 and advance one weekday
per row.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .ingest import PriceTable

GENERATOR = "splitmix64-counter/box-muller-cos"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_START = dt.date(2000, 1, 3)


def splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start + count - 1`` of the stream for ``seed``."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + k * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    return ((splitmix64(seed, start, count) >> np.uint64(11)) + np.uint64(1)) * 2.0**-53


def normals(seed: int, start: int, count: int) -> np.ndarray:
    u = uniforms(seed, 2 * start, 2 * count)
    return np.sqrt(-2.0 * np.log(u[0::2])) * np.cos(2.0 * np.pi * u[1::2])


def weekdays(start: dt.date, count: int) -> list[dt.date]:
    out, d = [], start
    while len(out) < count:
        if d.weekday() < 5:
            out.append(d)
        d += dt.timedelta(days=1)
    return out


@dataclass(frozen=True)
class SynthConfig:
    n: int = 40
    T: int = 600
    regimes: tuple[tuple[int, float], ...] = ((0, 0.2), (300, 0.7))
    vol: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one instrument, got n={self.n}")
        if self.T < 2:
            raise ValueError(f"need at least 2 days, got T={self.T}")
        if not self.regimes:
            raise ValueError("at least one regime is required")
        starts = [s for s, _ in self.regimes]
        if starts[0] != 0:
            raise ValueError("the first regime must start on day 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError(f"regime starts must be strictly increasing, got {starts}")
        for _, load in self.regimes:
            if not 0.0 <= load < 1.0:
                raise ValueError(f"regime loadings must lie in [0, 1), got {load}")
        if not self.vol > 0:
            raise ValueError(f"idiosyncratic volatility must be positive, got {self.vol}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def loadings(self) -> np.ndarray:
        """Loading for each of the ``T - 1`` return days."""
        out = np.empty(self.T - 1)
        for (s, load), nxt in zip(self.regimes, [s for s, _ in self.regimes[1:]] + [self.T]):
            out[s:nxt] = load
        return out


def generate_returns(cfg: SynthConfig) -> np.ndarray:
    days = cfg.T - 1
    f = normals(cfg.seed, 0, days)
    e = normals(cfg.seed, days, cfg.n * days).reshape(cfg.n, days)
    load = cfg.loadings()
    return cfg.vol * (load * f + np.sqrt(1.0 - load**2) * e)


def generate_market(cfg: SynthConfig) -> PriceTable:
    r = generate_returns(cfg)
    logp = np.log(100.0) + np.concatenate([np.zeros((cfg.n, 1)), np.cumsum(r, axis=1)], axis=1)
    width = len(str(cfg.n - 1))
    return PriceTable(
        instrument_ids=tuple(f"S{i:0{width}d}" for i in range(cfg.n)),
        dates=tuple(weekdays(_START, cfg.T)),
        prices=np.exp(logp),
    )
