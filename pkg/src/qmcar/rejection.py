"""Acceptance-rejection on point streams, smoothed weights, and estimators.

The driver is shared by every generator in the package. A *trial* maps a
block of stream points to candidate values and a boolean acceptance mask;
each candidate consumes exactly one point whether it is accepted or not, so
the number of candidates ``N`` and accepted points ``kappa(N)`` are well
defined and the run can be resumed from the stream cursor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .lds import PointStream

Trial = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

RATIO_FLOOR = 1e-3
FLOOR_CHECK_AFTER = 100_000


class RejectionError(RuntimeError):
    """Acceptance ratio collapsed; typically a wrong majorizing constant."""


@dataclass
class AcceptanceRecord:
    accepted: np.ndarray
    candidates_consumed: int
    meta: dict = field(default_factory=dict)

    @property
    def acceptance_ratio(self) -> float:
        if self.candidates_consumed == 0:
            return 0.0
        return len(self.accepted) / self.candidates_consumed

    def to_dict(self) -> dict:
        return {
            "accepted": np.asarray(self.accepted).tolist(),
            "candidates_consumed": int(self.candidates_consumed),
            "acceptance_ratio": self.acceptance_ratio,
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_plain)

    @classmethod
    def from_json(cls, text: str) -> "AcceptanceRecord":
        d = json.loads(text)
        return cls(np.asarray(d["accepted"], dtype=float), int(d["candidates_consumed"]), d.get("meta", {}))


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def accept_until(
    trial: Trial,
    stream: PointStream,
    count: int,
    ratio_floor: float = RATIO_FLOOR,
    check_after: int = FLOOR_CHECK_AFTER,
) -> AcceptanceRecord:
    """Run ``trial`` over stream points until ``count`` candidates are accepted.

    The stream is left positioned just after the candidate that completed the
    sample.
    """
    if count < 1:
        raise ValueError("count must be positive")
    start = stream.next_index
    chunks = []
    got = 0
    ratio_guess = 1.0  # the first batch measures the real ratio
    while got < count:
        need = count - got
        batch = int(math.ceil(need / max(ratio_guess, ratio_floor) * 1.05)) + 16
        base = stream.next_index
        values, ok = trial(stream.block(base, batch))
        hits = np.flatnonzero(ok)
        if got + hits.size >= count:
            last = hits[need - 1]
            chunks.append(values[hits[:need]])
            stream.next_index = int(base + last + 1)
            got = count
            break
        chunks.append(values[hits])
        got += hits.size
        stream.next_index = base + batch
        used = stream.next_index - start
        ratio_guess = max(got / used, 1e-12)
        if used >= check_after and got / used < ratio_floor:
            raise RejectionError(
                f"acceptance ratio {got / used:.2e} below floor {ratio_floor:.0e} after {used} candidates; "
                "check the majorizing constant"
            )
    return AcceptanceRecord(np.concatenate(chunks), stream.next_index - start)


def accept_over(trial: Trial, stream: PointStream, candidates: int) -> AcceptanceRecord:
    """Run ``trial`` over exactly ``candidates`` stream points."""
    start = stream.next_index
    values, ok = trial(stream.next_points(candidates))
    return AcceptanceRecord(values[ok], stream.next_index - start)


@dataclass
class RejectionTarget:
    """Target density ``f`` majorized by ``C * g``.

    ``g_inverse_cdf`` maps uniforms of shape ``(n,)`` (or ``(n, dim)`` when
    ``dim > 1``) to proposals. ``h`` defaults to ``f / (C g)``.
    """

    f: Callable
    g: Callable
    g_inverse_cdf: Callable
    C: float
    h: Callable | None = None
    dim: int = 1
    C_estimated: bool = False

    def __post_init__(self) -> None:
        if not self.C > 0:
            raise ValueError("majorizing constant must be positive")
        if self.h is None:
            f, g, C = self.f, self.g, self.C
            self.h = lambda x: f(x) / (C * g(x))

    def trial(self, points: np.ndarray):
        s = self.dim
        u = points[:, 0] if s == 1 else points[:, :s]
        x = self.g_inverse_cdf(u)
        return x, points[:, s] <= self.h(x)


def estimate_majorizing_constant(f: Callable, g: Callable, lo: float, hi: float, n: int = 10_000) -> float:
    """Grid maximum of ``f/g`` on the open interval, inflated by 1%."""
    x = lo + (hi - lo) * (np.arange(n) + 0.5) / n
    return 1.01 * float(np.max(f(x) / g(x)))


def ar_generate(target: RejectionTarget, stream: PointStream, count: int, ratio_floor: float = RATIO_FLOOR) -> AcceptanceRecord:
    """Draw ``count`` accepted points from ``target``; stream dims must be ``dim + 1``."""
    if stream.dims != target.dim + 1:
        raise ValueError(f"stream must have {target.dim + 1} dims, has {stream.dims}")
    rec = accept_until(target.trial, stream, count, ratio_floor=ratio_floor)
    rec.meta.update({"C": target.C, "C_estimated": target.C_estimated, "stream": stream.config()})
    return rec


def _scalar_out(value, *args):
    return float(value) if all(np.ndim(a) == 0 for a in args) else value


def sar1_weight(p_ratio, y, sigma: float = 0.2):
    """Ramp weight of width ``sigma`` centred on ``p_ratio = p(x)/gamma``."""
    if not 0.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (0, 1)")
    pr = np.asarray(p_ratio, dtype=float)
    ya = np.asarray(y, dtype=float)
    w = np.clip((pr + 0.5 * sigma - ya) / sigma, 0.0, 1.0)
    return _scalar_out(w, p_ratio, y)


def sar2_weight(p, A, B, gamma, y):
    """Piecewise-linear weight with lower/upper envelopes ``A < p < B <= gamma``."""
    p, A, B, y = (np.asarray(v, dtype=float) for v in (p, A, B, y))
    if np.any(A < 0) or np.any(A >= p) or np.any(p >= B) or np.any(B > gamma):
        raise ValueError("need 0 <= A < p < B <= gamma")
    gy = gamma * y
    rising = 1.0 + (p - B) * (gy - A) / ((B - A) * (p - A))
    falling = (p - A) * (gy - B) / ((B - A) * (p - B))
    w = np.where(gy <= A, 1.0, np.where(gy >= B, 0.0, np.where(gy <= p, rising, falling)))
    return _scalar_out(w, p, A, B, y)


@dataclass
class WeightedRecord:
    points: np.ndarray
    weights: np.ndarray
    candidates_consumed: int


def smoothed_generate(weigh: Callable, stream: PointStream, total_weight: float) -> WeightedRecord:
    """Draw candidates until their cumulative weight first reaches ``total_weight``.

    ``weigh(points) -> (x, w)`` computes candidates and their weights.
    """
    start = stream.next_index
    xs, ws = [], []
    acc = 0.0
    mean_w = 0.5
    while acc < total_weight:
        base = stream.next_index
        batch = max(64, int(1.05 * (total_weight - acc) / max(mean_w, 1e-6)) + 16)
        x, w = weigh(stream.block(base, batch))
        cum = acc + np.cumsum(w)
        k = int(np.searchsorted(cum, total_weight))
        if k < batch:
            xs.append(x[: k + 1])
            ws.append(w[: k + 1])
            stream.next_index = int(base + k + 1)
            break
        xs.append(x)
        ws.append(w)
        acc = float(cum[-1])
        stream.next_index = base + batch
        mean_w = acc / (stream.next_index - start)
    return WeightedRecord(np.concatenate(xs), np.concatenate(ws), stream.next_index - start)


def importance_estimate(f: Callable, p: Callable, points, weights=None, divisor: float | None = None) -> float:
    """``(1/divisor) * sum(w * f(x) / p(x))``; divisor defaults to the point count."""
    x = np.asarray(points, dtype=float)
    px = np.asarray(p(x), dtype=float)
    if np.any(px <= 0):
        raise ValueError("importance density must be positive at every point")
    ratio = np.asarray(f(x), dtype=float) / px
    if weights is not None:
        ratio = ratio * np.asarray(weights, dtype=float)
    n = len(x) if divisor is None else divisor
    return float(np.sum(ratio) / n)


def crude_estimate(f: Callable, stream: PointStream, n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    pts = stream.next_points(n)
    x = pts[:, 0] if stream.dims == 1 else pts
    return float(np.mean(f(x)))
