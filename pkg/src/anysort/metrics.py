"""Distance-to-sorted metrics, the information-theoretic comparison
lower bound, and per-step quality profiles.

The quality of a full-order estimate is its Kendall tau distance to the
true order: the number of item pairs the estimate puts in the wrong
relative order.  Mapping estimate entries through the true ranks turns
this into an inversion count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

DEFAULT_LEVELS = (2.5, 25.0, 50.0, 75.0, 97.5)


def kendall_tau(sequence) -> int:
    """Number of inversions: pairs p < q with sequence[p] > sequence[q].

    The input must be a permutation of 0..n-1; for an estimate expressed
    in true ranks this is exactly its Kendall tau distance to sorted.
    """
    seq = np.ascontiguousarray(sequence, dtype=np.int64)
    if seq.ndim != 1:
        raise ValueError(f"expected a one-dimensional sequence, got shape {seq.shape}")
    n = seq.shape[0]
    if n == 0:
        raise ValueError("sequence is empty")
    check = np.sort(seq)
    if check[0] != 0 or check[-1] != n - 1 or not np.array_equal(check, np.arange(n)):
        raise ValueError("sequence is not a permutation of 0..n-1")
    work = seq.copy()
    buf = np.empty(n, np.int64)
    return int(_kernels.count_inversions(work, buf))


def normalized_tau(sequence) -> float:
    """Inversion count divided by the pair count n(n-1)/2; needs n >= 2."""
    seq = np.asarray(sequence)
    n = seq.shape[0] if seq.ndim == 1 else 0
    if n < 2:
        raise ValueError(f"normalization needs n >= 2, got n={n}")
    return kendall_tau(seq) / (n * (n - 1) / 2)


def itlb(n: int) -> float:
    """Information-theoretic lower bound on comparisons to sort n items.

    Stirling form of log2(n!):  n log2 n - n/ln 2 + log2(2 pi n)/2.
    """
    if n < 2:
        raise ValueError(f"bound needs n >= 2, got n={n}")
    return n * math.log2(n) - n / math.log(2) + math.log2(2 * math.pi * n) / 2


def relative_overhead(comparisons: int, n: int) -> float:
    """Percentage excess of a comparison count over the lower bound."""
    if comparisons < 0:
        raise ValueError(f"comparison count must be >= 0, got {comparisons}")
    bound = itlb(n)
    return 100.0 * (comparisons - bound) / bound


@dataclass(frozen=True, eq=False)
class PerformanceProfile:
    """Kendall tau of the running estimate after each comparison.

    ``tau_by_step[k]`` is the distance after k+1 comparisons.  Steps past
    termination repeat the final (sorted, hence zero) estimate.
    """

    n: int
    tau_by_step: np.ndarray
    total_comparisons: int


def profile(trace, horizon: int | None = None) -> PerformanceProfile:
    """Score every estimate in a trace against the true order.

    ``horizon`` pads the profile with zeros up to a common length; it
    must be at least the trace's own comparison count.
    """
    total = trace.total_comparisons
    if horizon is None:
        horizon = total
    if horizon < total:
        raise ValueError(f"horizon {horizon} is shorter than the trace ({total} comparisons)")
    taus = np.zeros(horizon, np.int64)
    ranks = np.asarray(trace.ranks, dtype=np.int64)
    buf = np.empty(trace.n, np.int64)
    for k, est in enumerate(trace.estimates):
        seq = ranks[np.asarray(est, dtype=np.int64)]
        taus[k] = _kernels.count_inversions(seq, buf)
    return PerformanceProfile(n=trace.n, tau_by_step=taus, total_comparisons=total)


@dataclass(frozen=True, eq=False)
class QuantileBands:
    """Per-step quantiles across a batch of profiles.

    ``values[l, k]`` is the ``levels[l]`` percentile of the step-k
    distances.  Rows are ordered like ``levels`` and are pointwise
    non-decreasing in the level.
    """

    levels: tuple[float, ...]
    values: np.ndarray


def quantile_bands(profiles, levels=DEFAULT_LEVELS) -> QuantileBands:
    """Pointwise percentiles of many equally-long profiles.

    Percentiles use linear interpolation between order statistics.
    """
    profiles = list(profiles)
    if not profiles:
        raise ValueError("need at least one profile")
    levels = tuple(float(v) for v in levels)
    if not levels:
        raise ValueError("need at least one level")
    for v in levels:
        if not 0.0 <= v <= 100.0:
            raise ValueError(f"levels are percentages in [0, 100], got {v}")
    horizon = profiles[0].tau_by_step.shape[0]
    for p in profiles[1:]:
        if p.tau_by_step.shape[0] != horizon:
            raise ValueError("profiles have mismatched horizons; pad them to a common length")
    matrix = np.stack([p.tau_by_step for p in profiles]).astype(np.float64)
    values = np.quantile(matrix, [v / 100.0 for v in levels], axis=0, method="linear")
    return QuantileBands(levels=levels, values=values)
