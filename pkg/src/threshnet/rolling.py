"""Moving-window correlation matrices and matrix-level change."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ingest import ReturnSeries

NORMS = ("frobenius", "spectral")


@dataclass(frozen=True)
class WindowSpec:
    width: int = 250
    step: int = 5

    def __post_init__(self):
        if self.width < 2:
            raise ValueError(f"window width must be >= 2, got {self.width}")
        if self.step < 1:
            raise ValueError(f"window step must be >= 1, got {self.step}")


@dataclass(frozen=True)
class CorrMatrix:
    values: np.ndarray  # (n, n), symmetric, unit diagonal
    window: int = 0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def offdiag(self) -> np.ndarray:
        """Strict upper triangle, row-major."""
        return self.values[np.triu_indices(self.n, k=1)]


class ZeroVarianceError(ValueError):
    pass


def window_starts(T_obs: int, spec: WindowSpec) -> list[int]:
    if T_obs < spec.width:
        raise ValueError(f"window width {spec.width} exceeds the {T_obs} available observations")
    return list(range(0, T_obs - spec.width + 1, spec.step))


def correlation_matrix(r: ReturnSeries, start: int, width: int, window: int = 0) -> CorrMatrix:
    """Pearson correlation of every instrument pair over ``returns[:, start:start+width]``."""
    if start < 0 or width < 2 or start + width > r.T:
        raise ValueError(f"window [{start}, {start + width}) outside return series of length {r.T}")
    x = r.returns[:, start:start + width]
    xc = x - x.mean(axis=1, keepdims=True)
    ss = np.einsum("ij,ij->i", xc, xc)
    bad = np.flatnonzero(ss <= 0.0)
    if bad.size:
        raise ZeroVarianceError(
            f"instrument {r.instrument_ids[bad[0]]!r} has zero return variance in window {window} "
            f"(returns {start}..{start + width - 1})"
        )
    cov = xc @ xc.T
    inv = 1.0 / np.sqrt(ss)
    w = cov * inv[:, None] * inv[None, :]
    # mirror the upper triangle so symmetry is exact regardless of BLAS ordering
    iu = np.triu_indices(w.shape[0], k=1)
    w.T[iu] = w[iu]
    np.clip(w, -1.0, 1.0, out=w)
    np.fill_diagonal(w, 1.0)
    w.setflags(write=False)
    return CorrMatrix(values=w, window=window)


def correlation_matrices(r: ReturnSeries, spec: WindowSpec) -> list[CorrMatrix]:
    return [correlation_matrix(r, s, spec.width, k) for k, s in enumerate(window_starts(r.T, spec))]


def avg_correlation(W: CorrMatrix) -> float:
    """Mean off-diagonal correlation."""
    n = W.n
    if n < 2:
        raise ValueError("average correlation needs at least 2 instruments")
    return float(W.offdiag().sum() / (n * (n - 1) / 2))


def matrix_difference(W_a: CorrMatrix, W_b: CorrMatrix, norm: str = "frobenius") -> float:
    if W_a.n != W_b.n:
        raise ValueError(f"size mismatch: {W_a.n} vs {W_b.n}")
    diff = W_a.values - W_b.values
    if norm == "frobenius":
        return float(np.sqrt(np.sum(diff * diff)))
    if norm == "spectral":
        # symmetric difference: largest singular value = largest |eigenvalue|
        return float(np.max(np.abs(np.linalg.eigvalsh(diff)))) if diff.size else 0.0
    raise ValueError(f"norm must be one of {NORMS}, got {norm!r}")


_DUMP_HEADER = struct.Struct("<qq")


def dump_matrix(W: CorrMatrix, path: str | Path) -> None:
    """Binary layout: int64 n, int64 window (little-endian), then the strict
    upper triangle as float64 little-endian, row-major."""
    with open(path, "wb") as fh:
        fh.write(_DUMP_HEADER.pack(W.n, W.window))
        fh.write(W.offdiag().astype("<f8").tobytes())


def load_matrix(path: str | Path) -> CorrMatrix:
    data = Path(path).read_bytes()
    n, window = _DUMP_HEADER.unpack_from(data)
    upper = np.frombuffer(data, dtype="<f8", offset=_DUMP_HEADER.size)
    if upper.size != n * (n - 1) // 2:
        raise ValueError(f"{path}: expected {n * (n - 1) // 2} entries, found {upper.size}")
    w = np.eye(n)
    iu = np.triu_indices(n, k=1)
    w[iu] = upper
    w.T[iu] = upper
    w.setflags(write=False)
    return CorrMatrix(values=w, window=window)
