"""Goodness-of-fit statistics, discrepancies, error bounds and efficiency."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .distributions import DistributionSpec, cdf, sf

AD_CRITICAL = {"5%": 2.49, "10%": 1.93}
STAR_2D_MAX_POINTS = 4096


@dataclass
class GofReport:
    statistic_name: str
    value: float
    sample_size: int
    reference_points: dict = field(default_factory=lambda: dict(AD_CRITICAL))

    def passes(self, level: str = "5%") -> bool:
        return self.value < self.reference_points[level]

    def to_dict(self) -> dict:
        return asdict(self)


def _sorted_sample(sample) -> np.ndarray:
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("sample is empty")
    return x


def anderson_darling(sample, dist: DistributionSpec) -> float:
    """Anderson-Darling A^2 of ``sample`` against the fully specified ``dist``."""
    x = _sorted_sample(sample)
    n = x.size
    # lower-tail values from cdf, upper-tail from sf so neither log underflows early
    lo = np.clip(cdf(dist, x), 1e-300, 1.0 - 1e-16)
    up = np.clip(sf(dist, x), 1e-300, 1.0 - 1e-16)
    i = np.arange(1, n + 1)
    s = np.sum((2 * i - 1) * (np.log(lo) + np.log(up[::-1])))
    return float(-n - s / n)


def f_star_discrepancy(sample, dist: DistributionSpec | Callable) -> float:
    """Kolmogorov-Smirnov distance between the sample's EDF and ``dist``'s CDF."""
    x = _sorted_sample(sample)
    n = x.size
    F = cdf(dist, x) if isinstance(dist, DistributionSpec) else np.asarray(dist(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - F)), np.max(np.abs((i - 1) / n - F))))


def star_discrepancy_2d(points) -> float:
    """Exact star discrepancy of at most 4096 points in the unit square.

    Every anchored box ``[0, a) x [0, b)`` whose corner lies on the grid of
    point coordinates (plus 1) is evaluated with both open and closed counts.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        raise ValueError("no points")
    if n > STAR_2D_MAX_POINTS:
        raise ValueError(f"exact 2-D star discrepancy limited to {STAR_2D_MAX_POINTS} points, got {n}")
    xs = np.unique(np.append(pts[:, 0], 1.0))
    ys = np.unique(np.append(pts[:, 1], 1.0))
    ix = np.searchsorted(xs, pts[:, 0])
    iy = np.searchsorted(ys, pts[:, 1])
    grid = np.zeros((len(xs), len(ys)), dtype=np.int32)
    np.add.at(grid, (ix, iy), 1)
    closed = grid.cumsum(0).cumsum(1)
    # strictly-below counts: shift the closed counts by one in each axis
    opened = np.zeros_like(closed)
    opened[1:, 1:] = closed[:-1, :-1]
    best = 0.0
    for lo in range(0, len(xs), 512):
        sl = slice(lo, lo + 512)
        vol = xs[sl, None] * ys[None, :]
        best = max(best, float(np.max(closed[sl] / n - vol)), float(np.max(vol - opened[sl] / n)))
    return best


def partition_error_bound(points, edges, alpha: float, cdf_fn: Callable | None = None) -> float:
    """Bound on the indicator error for ``S = [edges[0], alpha)`` from a partition.

    Parameters
    ----------
    points : array_like
        The point set ``P`` (1-D).
    edges : array_like
        Increasing cell boundaries; cell ``j`` is ``[edges[j], edges[j+1])``.
        The cells must cover the domain of ``points``.
    alpha : float
        Right end of the anchored interval ``S``.
    cdf_fn : callable, optional
        Distribution function of the measure. Defaults to uniform on
        ``[edges[0], edges[-1]]``.

    Returns
    -------
    float
        ``sum_j mu(M_j) * osc_j(1_S) + sum_j |A(M_j; P)/N - mu(M_j)|``, where the
        oscillation is 1 on cells that straddle ``alpha`` and 0 elsewhere.
    """
    x = np.asarray(points, dtype=float).ravel()
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
        raise ValueError("edges must be strictly increasing with at least two entries")
    if x.size == 0:
        raise ValueError("point set is empty")
    if np.any(x < e[0]) or np.any(x >= e[-1]):
        raise ValueError("partition does not cover the point set")
    mu = _cell_measures(e, cdf_fn)
    counts = np.histogram(x, bins=e)[0]
    eps = np.abs(counts / x.size - mu)
    straddle = (e[:-1] < alpha) & (alpha < e[1:])
    return float(np.sum(mu[straddle]) + np.sum(eps))


def indicator_error(points, lo: float, alpha: float, cdf_fn: Callable | None = None, hi: float = 1.0) -> float:
    """``|A([lo, alpha); P)/N - mu([lo, alpha))|``."""
    x = np.asarray(points, dtype=float).ravel()
    frac = np.count_nonzero((x >= lo) & (x < alpha)) / x.size
    if cdf_fn is None:
        mu = (alpha - lo) / (hi - lo)
    else:
        mu = float(cdf_fn(alpha) - cdf_fn(lo))
    return abs(frac - mu)


def _cell_measures(e: np.ndarray, cdf_fn: Callable | None) -> np.ndarray:
    if cdf_fn is None:
        mu = np.diff(e) / (e[-1] - e[0])
    else:
        mu = np.diff(np.asarray(cdf_fn(e), dtype=float))
    if abs(mu.sum() - 1.0) > 1e-12:
        raise ValueError(f"cell measures sum to {mu.sum():.15g}, not 1")
    return mu


def efficiency(sigma_ref: float, t_ref: float, sigma_alg: float, t_alg: float) -> float:
    """``(sigma_ref^2 t_ref) / (sigma_alg^2 t_alg)``; above 1 means the algorithm wins."""
    if min(sigma_ref, t_ref, sigma_alg, t_alg) <= 0:
        raise ValueError("efficiency needs positive standard deviations and times")
    return (sigma_ref**2 * t_ref) / (sigma_alg**2 * t_alg)


def timed(fn: Callable, repeats: int = 5):
    """Run ``fn`` ``repeats`` times; return its first result and the median wall time."""
    times = []
    result = None
    for k in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
        if k == 0:
            result = out
    return result, float(np.median(times))
