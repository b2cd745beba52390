"""Acceptance-rejection generators for beta and gamma variates.

* :func:`beta_aw` -- Atkinson-Whittaker, ``max(alpha, beta) < 1``; 2-D points.
* :func:`gamma_ch` -- Cheng's log-logistic envelope, ``alpha > 1``; 2-D points.
* :func:`gamma_gs` -- Ahrens-Dieter GS*, ``alpha < 1``; 3-D points.

Each generator works with any :class:`~qmcar.lds.PointStream`, so the same
code gives the Monte Carlo version (pseudorandom stream) and the quasi-Monte
Carlo version (Halton or random-start Halton). ``count`` is the number of
*accepted* variates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lds import PointStream
from .rejection import AcceptanceRecord, accept_over, accept_until

CHENG_D = 2.5040774  # 1 + log(4.5)


def aw_constants(alpha: float, beta: float) -> tuple[float, float]:
    """Split point ``t`` and mixing probability ``p`` of the AW envelope."""
    t = 1.0 / (1.0 + math.sqrt(beta * (1.0 - beta) / (alpha * (1.0 - alpha))))
    p = beta * t / (beta * t + alpha * (1.0 - t))
    return t, p


def aw_trial(alpha: float, beta: float):
    t, p = aw_constants(alpha, beta)

    def trial(points: np.ndarray):
        u, v = points[:, 0], points[:, 1]
        y = -np.log(u)
        left = v <= p
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(
                left,
                t * (v / p) ** (1.0 / alpha),
                1.0 - (1.0 - t) * ((1.0 - v) / (1.0 - p)) ** (1.0 / beta),
            )
            # quick linear test first, then the exact log test
            ok_left = (y >= (1.0 - beta) * (t - x) / (1.0 - t)) | (y >= (1.0 - beta) * np.log((1.0 - x) / (1.0 - t)))
            ok_right = (y >= (1.0 - alpha) * (x / t - 1.0)) | (y >= (1.0 - alpha) * np.log(x / t))
        ok = np.where(left, ok_left, ok_right) & (x > 0) & (x < 1)
        return x, ok

    return trial


def ch_constants(alpha: float) -> tuple[float, float, float]:
    a = 1.0 / math.sqrt(2.0 * alpha - 1.0)
    return a, alpha - math.log(4.0), alpha + 1.0 / a


def ch_trial(alpha: float):
    a, b, c = ch_constants(alpha)

    def trial(points: np.ndarray):
        u, v = points[:, 0], points[:, 1]
        y = a * np.log(u / (1.0 - u))
        x = alpha * np.exp(y)
        z = u * u * v
        r = b + c * y - x
        ok = (r + CHENG_D - 4.5 * z >= 0) | (r >= np.log(z))
        return x, ok

    return trial


def gs_constant(alpha: float) -> float:
    return (alpha + math.e) / math.e


def gs_trial(alpha: float):
    b = gs_constant(alpha)

    def trial(points: np.ndarray):
        u, v, w = points[:, 0], points[:, 1], points[:, 2]
        y = b * u
        head = y <= 1.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            x = np.where(head, y ** (1.0 / alpha), -np.log((b - y) / alpha))
            # tail test: accept w.p. x**(alpha-1), i.e. w**(1/(alpha-1)) >= x
            ok = np.where(head, -np.log(v) >= x, w ** (1.0 / (alpha - 1.0)) >= x)
        return x, ok & (x > 0)

    return trial


def exponential_trial():
    def trial(points: np.ndarray):
        x = -np.log1p(-points[:, 0])
        return x, np.ones(len(x), dtype=bool)

    return trial


def _need_dims(stream: PointStream, dims: int, name: str) -> None:
    if stream.dims != dims:
        raise ValueError(f"{name} needs a {dims}-dimensional stream, got {stream.dims}")


def _run(trial, stream, count, candidates):
    if (count is None) == (candidates is None):
        raise ValueError("give exactly one of count or candidates")
    if candidates is not None:
        return accept_over(trial, stream, candidates)
    return accept_until(trial, stream, count)


def beta_aw(alpha: float, beta: float, stream: PointStream, count: int | None = None,
            candidates: int | None = None) -> AcceptanceRecord:
    """Beta(alpha, beta) variates for ``0 < alpha, beta < 1``.

    Pass ``count`` to stop after that many acceptances, or ``candidates`` to
    process a fixed number of stream points.
    """
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ValueError("beta_aw needs 0 < alpha, beta < 1")
    _need_dims(stream, 2, "beta_aw")
    rec = _run(aw_trial(alpha, beta), stream, count, candidates)
    rec.meta.update({"sampler": "beta_aw", "alpha": alpha, "beta": beta, "stream": stream.config()})
    return rec


def gamma_ch(alpha: float, stream: PointStream, count: int | None = None,
             candidates: int | None = None) -> AcceptanceRecord:
    """Gamma(alpha, 1) variates for ``alpha > 1``."""
    if not alpha > 1:
        raise ValueError("gamma_ch needs alpha > 1")
    _need_dims(stream, 2, "gamma_ch")
    rec = _run(ch_trial(alpha), stream, count, candidates)
    rec.meta.update({"sampler": "gamma_ch", "alpha": alpha, "stream": stream.config()})
    return rec


def gamma_gs(alpha: float, stream: PointStream, count: int | None = None,
             candidates: int | None = None) -> AcceptanceRecord:
    """Gamma(alpha, 1) variates for ``0 < alpha < 1``."""
    if not 0 < alpha < 1:
        raise ValueError("gamma_gs needs 0 < alpha < 1")
    _need_dims(stream, 3, "gamma_gs")
    rec = _run(gs_trial(alpha), stream, count, candidates)
    rec.meta.update({"sampler": "gamma_gs", "alpha": alpha, "stream": stream.config()})
    return rec


def gamma_route(alpha: float) -> tuple[str, int]:
    """Name of the generator used for ``alpha`` and the stream dimension it needs."""
    if alpha <= 0:
        raise ValueError("gamma shape must be positive")
    if alpha > 1:
        return "gamma_ch", 2
    if alpha < 1:
        return "gamma_gs", 3
    return "exponential", 1


def gamma_trial(alpha: float):
    route, _ = gamma_route(alpha)
    if route == "gamma_ch":
        return ch_trial(alpha)
    if route == "gamma_gs":
        return gs_trial(alpha)
    return exponential_trial()


def gamma_sample(alpha: float, scale: float, stream: PointStream, count: int) -> AcceptanceRecord:
    """Gamma(alpha, scale) variates, routed by shape; ``alpha == 1`` is inverted exactly."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    route, dims = gamma_route(alpha)
    _need_dims(stream, dims, route)
    rec = accept_until(gamma_trial(alpha), stream, count)
    rec.accepted = rec.accepted * scale
    rec.meta.update({"sampler": route, "alpha": alpha, "scale": scale, "stream": stream.config()})
    return rec


@dataclass(frozen=True)
class SamplerConfig:
    family: str
    alpha: float
    beta: float | None = None
    scale: float = 1.0
    count: int = 1

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.family == "beta_aw":
            if self.beta is None or not max(self.alpha, self.beta) < 1 or min(self.alpha, self.beta) <= 0:
                raise ValueError("beta_aw requires 0 < alpha, beta < 1")
        elif self.family == "gamma_ch":
            if not self.alpha > 1:
                raise ValueError("gamma_ch requires alpha > 1")
        elif self.family == "gamma_gs":
            if not 0 < self.alpha < 1:
                raise ValueError("gamma_gs requires 0 < alpha < 1")
        else:
            raise ValueError(f"unknown sampler {self.family!r}")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def dims(self) -> int:
        return 3 if self.family == "gamma_gs" else 2

    def run(self, stream: PointStream) -> AcceptanceRecord:
        if self.family == "beta_aw":
            return beta_aw(self.alpha, self.beta, stream, self.count)
        rec = (gamma_ch if self.family == "gamma_ch" else gamma_gs)(self.alpha, stream, self.count)
        rec.accepted = rec.accepted * self.scale
        return rec
