"""Threshold estimation by maximising dynamic consistence.

For every grid threshold the per-window graph sequence is built, successive
graphs are compared with the D-measure, and the resulting sequence is Pearson
correlated with the successive correlation-matrix differences. The estimate is
the grid threshold with the largest correlation.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .dissim import DissimWeights, GraphSummary, d_terms, summarize
from .ingest import ReturnSeries
from .netgraph import ThresholdGraph, distance_profile, degrees, pack_rows, threshold_graph
from .rolling import NORMS, CorrMatrix, WindowSpec, correlation_matrix, matrix_difference, window_starts

log = logging.getLogger(__name__)

_GRID_DECIMALS = 10


class SweepError(ValueError):
    pass


class DegenerateSweepError(SweepError):
    """Every grid point produced an undefined consistence."""


def grid_size(theta_min: float, theta_max: float, theta_step: float) -> int:
    return int(math.floor((theta_max - theta_min) / theta_step + 1e-9)) + 1


def theta_grid(theta_min: float, theta_max: float, theta_step: float) -> np.ndarray:
    if not theta_min < theta_max:
        raise ValueError(f"theta_min ({theta_min}) must be below theta_max ({theta_max})")
    if not theta_step > 0:
        raise ValueError(f"theta_step must be positive, got {theta_step}")
    k = np.arange(grid_size(theta_min, theta_max, theta_step))
    return np.round(theta_min + theta_step * k, _GRID_DECIMALS)


def auto_theta_min(min_corr: float, theta_step: float = 0.01) -> float:
    """One step below the smallest observed correlation, floored to the grid step."""
    floored = math.floor(round(min_corr / theta_step, 6)) * theta_step
    return round(floored - theta_step, _GRID_DECIMALS)


def consistence(diff_n: Sequence[float], diff_w: Sequence[float]) -> float:
    """Pearson correlation of the two change sequences; NaN if either is constant."""
    x = np.asarray(diff_n, dtype=np.float64)
    y = np.asarray(diff_w, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"sequences must be 1-D and equally long, got {x.shape} and {y.shape}")
    if x.size < 3:
        raise ValueError(f"consistence needs at least 3 points, got {x.size}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        log.debug("consistence undefined: %s sequence is constant", "network" if np.ptp(x) == 0 else "matrix")
        return math.nan
    xc = x - x.mean()
    yc = y - y.mean()
    r = np.dot(xc, yc) / math.sqrt(np.dot(xc, xc) * np.dot(yc, yc))
    return float(min(1.0, max(-1.0, r)))


class Argmax(NamedTuple):
    theta: float
    ties: tuple[float, ...]


def argmax_theta(thetas: Sequence[float], values: Sequence[float]) -> Argmax:
    """Smallest grid threshold attaining the largest defined value; ``ties`` lists the others."""
    thetas = np.asarray(thetas, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if thetas.shape != values.shape:
        raise ValueError("grid and values differ in length")
    defined = ~np.isnan(values)
    if not defined.any():
        raise DegenerateSweepError("no defined consistence value on the grid")
    best = values[defined].max()
    hits = np.flatnonzero(defined & (values == best))
    ties = tuple(float(t) for t in thetas[hits[1:]])
    if ties:
        log.info("argmax tie at G=%r: theta %r also attains it", float(best), ties)
    return Argmax(float(thetas[hits[0]]), ties)


@dataclass(frozen=True)
class SweepConfig:
    window: WindowSpec = field(default_factory=WindowSpec)
    theta_min: float | None = None  # None: derive from the observed correlation range
    theta_max: float = 1.0
    theta_step: float = 0.01
    weights: DissimWeights = field(default_factory=DissimWeights)
    norm: str = "frobenius"
    workers: int = 1
    keep_diff_n: bool = False

    def __post_init__(self):
        if self.norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}, got {self.norm!r}")
        if self.theta_step <= 0:
            raise ValueError(f"theta_step must be positive, got {self.theta_step}")
        if self.theta_min is not None and not self.theta_min < self.theta_max:
            raise ValueError(f"theta_min ({self.theta_min}) must be below theta_max ({self.theta_max})")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class SweepResult:
    thetas: np.ndarray
    g_values: np.ndarray  # NaN where undefined
    theta_hat: float
    ties: tuple[float, ...]
    diff_w: np.ndarray
    corr_min: float
    corr_max: float
    diff_n: np.ndarray | None = None  # (len(thetas), windows - 1) when kept

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.g_values)


def _trivial_summary(n: int, complete: bool) -> GraphSummary:
    adj = ~np.eye(n, dtype=bool) if complete else np.zeros((n, n), dtype=bool)
    return summarize(ThresholdGraph(n, pack_rows(adj)))


class _WindowSummarizer:
    """Summaries of one window's graphs across the whole grid.

    Thresholds at or below the smallest correlation give the complete graph and
    thresholds above the largest give the empty graph; both are shared.
    """

    def __init__(self, r: ReturnSeries, starts: Sequence[int], width: int, thetas: np.ndarray):
        self.r, self.starts, self.width, self.thetas = r, starts, width, thetas
        self.complete = _trivial_summary(r.n, True)
        self.empty = _trivial_summary(r.n, False)

    def __call__(self, k: int) -> list[GraphSummary]:
        W = correlation_matrix(self.r, self.starts[k], self.width, k)
        off = W.offdiag()
        lo, hi = off.min(), off.max()
        out = []
        for theta in self.thetas:
            if theta <= lo:
                out.append(self.complete)
            elif theta > hi:
                out.append(self.empty)
            else:
                g = threshold_graph(W, theta)
                out.append(summarize(g, distance_profile(g), degrees(g)))
        return out


def _chunk_diffs(summ: _WindowSummarizer, lo: int, hi: int) -> np.ndarray:
    """D-measures for window pairs (k, k+1), k in [lo, hi), for every grid point."""
    out = np.empty((len(summ.thetas), 3, hi - lo))
    prev = summ(lo)
    for k in range(lo, hi):
        cur = summ(k + 1)
        for i, (a, b) in enumerate(zip(prev, cur)):
            out[i, :, k - lo] = d_terms(a, b)
        prev = cur
    return out


def _matrix_pass(r: ReturnSeries, starts: Sequence[int], width: int, norm: str):
    diffs = []
    cmin, cmax = math.inf, -math.inf
    prev: CorrMatrix | None = None
    for k, s in enumerate(starts):
        W = correlation_matrix(r, s, width, k)
        off = W.offdiag()
        if off.size:
            cmin, cmax = min(cmin, float(off.min())), max(cmax, float(off.max()))
        if prev is not None:
            diffs.append(matrix_difference(prev, W, norm))
        prev = W
    return np.array(diffs), cmin, cmax


def sweep(returns: ReturnSeries, cfg: SweepConfig = SweepConfig()) -> SweepResult:
    """Consistence curve over the threshold grid and its argmax.

    The output does not depend on ``cfg.workers``: each D-measure is computed
    from the same inputs by the same code whatever the chunking.
    """
    if returns.n < 3:
        raise SweepError(f"need at least 3 instruments, got {returns.n}")
    starts = window_starts(returns.T, cfg.window)
    if len(starts) < 4:
        raise SweepError(f"need at least 4 windows for 3 successive differences, got {len(starts)}")
    diff_w, cmin, cmax = _matrix_pass(returns, starts, cfg.window.width, cfg.norm)
    theta_min = auto_theta_min(cmin, cfg.theta_step) if cfg.theta_min is None else cfg.theta_min
    thetas = theta_grid(theta_min, cfg.theta_max, cfg.theta_step)
    log.info("sweep: %d windows, %d thresholds [%g, %g], %d worker(s)",
             len(starts), len(thetas), thetas[0], thetas[-1], cfg.workers)

    summ = _WindowSummarizer(returns, starts, cfg.window.width, thetas)
    pairs = len(starts) - 1
    n_chunks = min(pairs, 4 * cfg.workers)
    bounds = np.linspace(0, pairs, n_chunks + 1).round().astype(int)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if cfg.workers == 1:
        parts = [_chunk_diffs(summ, a, b) for a, b in spans]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda ab: _chunk_diffs(summ, *ab), spans))
    terms = np.concatenate(parts, axis=2)
    w = cfg.weights
    diff_n = w.alpha * terms[:, 0] + w.beta * terms[:, 1] + w.gamma * terms[:, 2]

    g_values = np.array([consistence(row, diff_w) for row in diff_n])
    best = argmax_theta(thetas, g_values)
    return SweepResult(
        thetas=thetas,
        g_values=g_values,
        theta_hat=best.theta,
        ties=best.ties,
        diff_w=diff_w,
        corr_min=cmin,
        corr_max=cmax,
        diff_n=diff_n if cfg.keep_diff_n else None,
    )

