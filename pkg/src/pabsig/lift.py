"""Lifting sampled paths to truncated signatures and log-linear descriptions.

A sampled path is interpolated piecewise linearly.  Its truncated signature
over a window is the ordered product of per-segment exponentials (Chen's
identity), and the truncated logarithm of that product summarizes the window
as a single Lie element.  A piecewise-abelian path fixes a partition and
keeps one such log-signature per interval; between partition points the
description evolves log-linearly.  Degree 1 recovers the piecewise linear
path itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .tensors import (
    ShapeMismatchError,
    TruncTensor,
    _exp,
    _log,
    _mul,
    tensor_dim,
)

__all__ = [
    "TimeSeries",
    "LieIncrement",
    "PiecewiseAbelianPath",
    "segment_signature",
    "chen_signature",
    "log_signature",
    "build_pab",
    "pab_partial_signatures",
    "thin_partition",
]


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Strictly increasing timestamps with d-dimensional samples."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or times.size < 2:
            raise ValueError(f"need at least 2 samples, got times shape {times.shape}")
        if values.ndim != 2 or values.shape[0] != times.size:
            raise ValueError(
                f"values shape {values.shape} does not match {times.size} timestamps"
            )
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ValueError("non-finite sample")
        if not np.all(np.diff(times) > 0):
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def n_segments(self) -> int:
        return self.times.size - 1

    def increments(self) -> np.ndarray:
        """First differences of the samples, shape (n_segments, dim)."""
        return np.diff(self.values, axis=0)

    def locate(self, t: float) -> int:
        """Index of a sample time; raises if t is not on the grid."""
        i = int(np.searchsorted(self.times, t))
        if i == self.times.size or self.times[i] != t:
            raise ValueError(f"time {t!r} is not a sample time")
        return i


@dataclass(frozen=True, eq=False)
class LieIncrement:
    """Log-signature of a path over one interval; scalar slot exactly 0."""

    tensor: TruncTensor
    span: Tuple[float, float]

    def __post_init__(self):
        if self.tensor.coeffs[0] != 0.0:
            raise ValueError("log-signature must have scalar slot 0")
        t0, t1 = self.span
        if not t0 < t1:
            raise ValueError(f"empty or reversed span {self.span}")
        object.__setattr__(self, "span", (float(t0), float(t1)))


@dataclass(frozen=True, eq=False)
class PiecewiseAbelianPath:
    """Partition times plus one interval log-signature per interval."""

    dim: int
    degree: int
    partition: np.ndarray
    increments: Tuple[LieIncrement, ...]

    def __post_init__(self):
        part = np.asarray(self.partition, dtype=np.float64)
        incs = tuple(self.increments)
        if part.ndim != 1 or part.size < 2:
            raise ValueError("partition needs at least 2 points")
        if not np.all(np.diff(part) > 0):
            raise ValueError("partition must be strictly increasing")
        if len(incs) != part.size - 1:
            raise ValueError(
                f"{len(incs)} increments for {part.size - 1} intervals"
            )
        for i, inc in enumerate(incs):
            if inc.tensor.dim != self.dim or inc.tensor.degree != self.degree:
                raise ShapeMismatchError(
                    f"increment {i} is (d={inc.tensor.dim}, m={inc.tensor.degree}), "
                    f"path is (d={self.dim}, m={self.degree})"
                )
            if inc.span != (part[i], part[i + 1]):
                raise ValueError(
                    f"increment {i} spans {inc.span}, interval is "
                    f"({part[i]}, {part[i + 1]})"
                )
        object.__setattr__(self, "partition", part)
        object.__setattr__(self, "increments", incs)

    @property
    def n_intervals(self) -> int:
        return self.partition.size - 1

    def increment_matrix(self) -> np.ndarray:
        """Interval log-signatures stacked into shape (n_intervals, N(d, m))."""
        return np.stack([inc.tensor.coeffs for inc in self.increments])


def _embed_level1(d: int, m: int, delta: np.ndarray) -> np.ndarray:
    out = np.zeros(tensor_dim(d, m))
    out[1:1 + d] = delta
    return out


def segment_signature(delta: Sequence[float], m: int) -> TruncTensor:
    """Signature of one linear segment: exp of the level-1 increment."""
    delta = np.asarray(delta, dtype=np.float64)
    if delta.ndim != 1 or delta.size < 1:
        raise ValueError(f"increment must be a vector, got shape {delta.shape}")
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    d = delta.size
    return TruncTensor(d, m, _exp(d, m, _embed_level1(d, m, delta)))


def _window_indices(ts: TimeSeries, window: Optional[Tuple[float, float]]) -> Tuple[int, int]:
    if window is None:
        return 0, ts.times.size - 1
    s, t = window
    if not s < t:
        raise ValueError(f"window must satisfy s < t, got {window}")
    return ts.locate(s), ts.locate(t)


def _chen(d: int, m: int, deltas: np.ndarray) -> np.ndarray:
    sig = np.zeros(tensor_dim(d, m))
    sig[0] = 1.0
    for delta in deltas:
        sig = _mul(d, m, sig, _exp(d, m, _embed_level1(d, m, delta)))
    return sig


def chen_signature(ts: TimeSeries, window: Optional[Tuple[float, float]], m: int) -> TruncTensor:
    """Truncated signature over a window whose endpoints are sample times.

    Multiplicative over concatenation: the product of the signatures of
    [s, u] and [u, t] equals the signature of [s, t] for any interior
    sample time u.
    """
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    i0, i1 = _window_indices(ts, window)
    deltas = np.diff(ts.values[i0:i1 + 1], axis=0)
    return TruncTensor(ts.dim, m, _chen(ts.dim, m, deltas))


def log_signature(ts: TimeSeries, window: Optional[Tuple[float, float]], m: int) -> LieIncrement:
    """Truncated log of the window signature, tagged with the window span."""
    i0, i1 = _window_indices(ts, window)
    sig = chen_signature(ts, window, m)
    tensor = TruncTensor(ts.dim, m, _log(ts.dim, m, sig.coeffs))
    return LieIncrement(tensor, (float(ts.times[i0]), float(ts.times[i1])))


def build_pab(ts: TimeSeries, partition: Sequence[float], m: int) -> PiecewiseAbelianPath:
    """Piecewise-abelian description of degree m on a partition.

    Every partition point must be a sample time (no resampling happens
    here), and the partition must span the whole series.
    """
    part = np.asarray(partition, dtype=np.float64)
    if part.ndim != 1 or part.size < 2:
        raise ValueError("partition needs at least 2 points")
    idx = [ts.locate(t) for t in part]
    if idx[0] != 0 or idx[-1] != ts.times.size - 1:
        raise ValueError("partition must cover the whole series")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("partition must be strictly increasing")
    incs = [
        log_signature(ts, (part[i], part[i + 1]), m)
        for i in range(part.size - 1)
    ]
    return PiecewiseAbelianPath(ts.dim, m, part, tuple(incs))


def pab_partial_signatures(p: PiecewiseAbelianPath) -> List[TruncTensor]:
    """Running products G_i = exp(L_0) (x) ... (x) exp(L_{i-1}), G_0 = 1."""
    d, m = p.dim, p.degree
    g = np.zeros(tensor_dim(d, m))
    g[0] = 1.0
    out = [TruncTensor(d, m, g.copy())]
    for inc in p.increments:
        g = _mul(d, m, g, _exp(d, m, inc.tensor.coeffs))
        out.append(TruncTensor(d, m, g.copy()))
    return out


def thin_partition(ts: TimeSeries, every: int) -> np.ndarray:
    """Every k-th sample time, always keeping the final one."""
    if every < 1:
        raise ValueError(f"subsampling stride must be >= 1, got {every}")
    n = ts.times.size - 1
    idx = list(range(0, n + 1, every))
    if idx[-1] != n:
        idx.append(n)
    return ts.times[idx]
