"""Seven-dimensional importance-sampling benchmark.

The integrand is

    f(x) = exp(1 - sum_{i<=3} sin^2(pi x_i / 2)) * arcsin(sin(1) + sum_{i<=7} x_i / 200)

and the importance density ``p`` is the exponential factor divided by its
integral over the cube. Four estimators are compared:

``cr``
    crude average of ``f`` over 7-D points.
``ar``
    average of ``f/p`` over ``N`` points accepted from 8-D candidates
    ``(x, y)`` with ``y < p(x)/gamma``.
``sar1`` / ``sar2``
    weighted averages of ``f/p`` using the ramp or envelope weights; the
    candidates run until the weight total reaches ``N`` and the divisor is
    ``N``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .lds import PointStream
from .rejection import accept_until, importance_estimate, sar1_weight, sar2_weight, smoothed_generate

DIM = 7
HEAD = 3  # coordinates entering the exponential factor
ESTIMATORS = ("cr", "sar1", "sar2", "ar")
SAR1_SIGMA = 0.2
# tensor Gauss-Legendre value from scripts/compute_reference_integral.py
REFERENCE_INTEGRAL = 0.751729230791647


@lru_cache(maxsize=1)
def _one_dim_factor() -> float:
    from scipy import integrate

    val, _ = integrate.quad(lambda t: math.exp(-math.sin(0.5 * math.pi * t) ** 2), 0.0, 1.0,
                            epsabs=1e-14, epsrel=1e-12)
    return val


def normalizer() -> float:
    """Integral of ``exp(1 - sum sin^2)`` over the cube, i.e. ``e * J**3``."""
    return math.e * _one_dim_factor() ** HEAD


def gamma_bound() -> float:
    """``sup p = e / normalizer()``; also the SAR2 upper envelope."""
    return math.e / normalizer()


def envelopes() -> tuple[float, float]:
    """Constant SAR2 envelopes ``(inf p, sup p)``."""
    c = normalizer()
    return 1.0 / (c * math.e**2), math.e / c


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != DIM:
        raise ValueError(f"points must have {DIM} coordinates, got shape {x.shape}")
    return x


def _head_factor(x: np.ndarray) -> np.ndarray:
    return np.exp(1.0 - np.sum(np.sin(0.5 * np.pi * x[..., :HEAD]) ** 2, axis=-1))


def test_integrand(x):
    x = _as_points(x)
    out = _head_factor(x) * np.arcsin(math.sin(1.0) + x.sum(axis=-1) / 200.0)
    return float(out) if out.ndim == 0 else out


def importance_density(x):
    x = _as_points(x)
    out = _head_factor(x) / normalizer()
    return float(out) if out.ndim == 0 else out


def stream_dims(estimator: str) -> int:
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    return DIM if estimator == "cr" else DIM + 1


def _split(points: np.ndarray):
    return points[:, :DIM], points[:, DIM]


def estimate(estimator: str, stream: PointStream, n: int, sigma: float = SAR1_SIGMA) -> tuple[float, int]:
    """One estimate of the integral and the number of stream points consumed."""
    if n < 1:
        raise ValueError("n must be positive")
    need = stream_dims(estimator)
    if stream.dims != need:
        raise ValueError(f"{estimator} needs a {need}-dimensional stream, got {stream.dims}")
    start = stream.next_index
    gam = gamma_bound()

    if estimator == "cr":
        val = float(np.mean(test_integrand(stream.next_points(n))))
        return val, n

    if estimator == "ar":
        def trial(points):
            x, y = _split(points)
            return x, y < importance_density(x) / gam

        rec = accept_until(trial, stream, n)
        return importance_estimate(test_integrand, importance_density, rec.accepted), rec.candidates_consumed

    a, b = envelopes()

    def weigh(points):
        x, y = _split(points)
        p = importance_density(x)
        if estimator == "sar1":
            return x, sar1_weight(p / gam, y, sigma)
        # keep p strictly inside the envelopes after rounding
        p_in = np.clip(p, np.nextafter(a, np.inf), np.nextafter(b, 0.0))
        return x, sar2_weight(p_in, a, b, gam, y)

    rec = smoothed_generate(weigh, stream, float(n))
    val = importance_estimate(test_integrand, importance_density, rec.points, rec.weights, divisor=n)
    return val, stream.next_index - start
