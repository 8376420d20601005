"""Shared builders for randomized tests."""

import numpy as np

from pabsig import (
    LieIncrement,
    PiecewiseAbelianPath,
    TimeSeries,
    TruncTensor,
    embed,
    exp_trunc,
    inner,
    linear_combine,
    mul_trunc,
    tensor_dim,
    unit,
)


def rand_tensor(rng, d, m, scale=1.0):
    return TruncTensor(d, m, rng.standard_normal(tensor_dim(d, m)) * scale)


def rand_scalar_free(rng, d, m, scale=1.0):
    coeffs = rng.standard_normal(tensor_dim(d, m)) * scale
    coeffs[0] = 0.0
    return TruncTensor(d, m, coeffs)


def level_one(d, m, vec):
    coeffs = np.zeros(tensor_dim(d, m))
    coeffs[1:1 + d] = vec
    return TruncTensor(d, m, coeffs)


def bracket(a, b):
    return linear_combine(1.0, mul_trunc(a, b), -1.0, mul_trunc(b, a))


def rand_lie(rng, d, m, scale=0.4):
    """Random Lie polynomial of degree m built from nested brackets."""
    a = level_one(d, m, rng.standard_normal(d) * scale)
    b = level_one(d, m, rng.standard_normal(d) * scale)
    out = level_one(d, m, rng.standard_normal(d) * scale)
    term = a
    for _ in range(2, m + 1):
        term = bracket(term, b)
        out = linear_combine(1.0, out, rng.standard_normal(), term)
    return out


def rand_pab(rng, d, m, n_intervals, scale=0.4):
    partition = np.arange(n_intervals + 1, dtype=float)
    incs = tuple(
        LieIncrement(rand_lie(rng, d, m, scale), (float(i), float(i + 1)))
        for i in range(n_intervals)
    )
    return PiecewiseAbelianPath(d, m, partition, incs)


def refine_pab(pab, r):
    """Split every interval of a piecewise-abelian path into r equal parts."""
    t = pab.partition
    partition = []
    incs = []
    for i, inc in enumerate(pab.increments):
        width = (t[i + 1] - t[i]) / r
        piece = TruncTensor(pab.dim, pab.degree, inc.tensor.coeffs / r)
        for s in range(r):
            lo = t[i] + s * width
            hi = t[i + 1] if s == r - 1 else t[i] + (s + 1) * width
            partition.append(lo)
            incs.append(LieIncrement(piece, (float(lo), float(hi))))
    partition.append(t[-1])
    return PiecewiseAbelianPath(pab.dim, pab.degree, np.array(partition), tuple(incs))


def pad_pab(pab, eta):
    """Zero-pad every increment to a higher degree eta."""
    incs = tuple(
        LieIncrement(embed(inc.tensor, eta), inc.span) for inc in pab.increments
    )
    return PiecewiseAbelianPath(pab.dim, eta, pab.partition, incs)


def pa_exact_kernel(px, py, n_high):
    """Signature inner product of two piecewise-abelian paths at a high
    truncation level, bypassing the PDE solver entirely."""
    def full_sig(pab):
        sig = unit(pab.dim, n_high)
        for inc in pab.increments:
            sig = mul_trunc(sig, exp_trunc(embed(inc.tensor, n_high)))
        return sig
    return inner(full_sig(px), full_sig(py))


def rand_series(rng, d, n_segments, scale=0.3, times=None):
    if times is None:
        times = np.linspace(0.0, 1.0, n_segments + 1)
    steps = rng.standard_normal((n_segments, d)) * scale
    values = np.vstack([np.zeros(d), np.cumsum(steps, axis=0)])
    return TimeSeries(times, values)


def line_series(v, n_segments, horizon=1.0):
    """Straight-line path along v sampled on a uniform grid."""
    v = np.asarray(v, dtype=float)
    times = np.linspace(0.0, horizon, n_segments + 1)
    return TimeSeries(times, np.outer(times / horizon, v))


def series_with_variation(rng, d, n_kinks, total, n_per_segment=1):
    """Piecewise linear path with 1-variation exactly `total`, sampled with
    n_per_segment points per linear piece."""
    steps = rng.standard_normal((n_kinks, d))
    norms = np.linalg.norm(steps, axis=1)
    steps *= total / norms.sum()
    values = [np.zeros(d)]
    for s in steps:
        base = values[-1]
        for q in range(1, n_per_segment + 1):
            values.append(base + s * (q / n_per_segment))
    values = np.array(values)
    times = np.linspace(0.0, 1.0, len(values))
    return TimeSeries(times, values)
