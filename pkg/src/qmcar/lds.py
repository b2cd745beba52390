"""Point streams on the open unit cube.

Three kinds share one interface:

* ``pseudorandom`` -- numpy's PCG64, point ``k`` uses draws ``k*s .. k*s+s-1``.
* ``halton`` -- the Halton sequence in the first ``s`` prime bases, starting
  at index 1 (the all-zero point is skipped).
* ``random_start_halton`` -- the b-adic odometer (add one with carry, digit by
  digit) iterated from a start point drawn uniformly from PCG64.

Every point is a pure function of ``(kind, dims, seed, index)``, so a stream
can be rewound or resumed by setting its cursor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

EPS = 1e-15
KINDS = ("pseudorandom", "halton", "random_start_halton")
PRNG_ALGORITHM = "numpy.random.PCG64"

_PRIMES: list[int] = []


def first_primes(s: int) -> list[int]:
    """Return the first ``s`` primes."""
    candidate = _PRIMES[-1] + 1 if _PRIMES else 2
    while len(_PRIMES) < s:
        if all(candidate % p for p in _PRIMES if p * p <= candidate):
            _PRIMES.append(candidate)
        candidate += 1
    return _PRIMES[:s]


def radical_inverse(n: int, b: int) -> float:
    """Reflect the base-``b`` digits of ``n`` about the radix point.

    >>> radical_inverse(6, 3)
    0.2222222222222222
    """
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    value, scale = 0, 1
    while n:
        n, d = divmod(n, b)
        value = value * b + d
        scale *= b
    return value / scale


def _reverse_int(n: int, b: int, k: int) -> int:
    rev = 0
    for _ in range(k):
        n, d = divmod(n, b)
        rev = rev * b + d
    return rev


def _digits(b: int) -> int:
    # number of base-b digits resolvable in a double
    return int(53 * math.log(2) / math.log(b))


TABLE_LIMIT = 4096  # largest b**m digit-reversal table


@lru_cache(maxsize=None)
def _reversal_table(b: int, m: int) -> np.ndarray:
    """``table[d]`` is ``d`` written with ``m`` base-``b`` digits, reversed."""
    d = np.arange(b**m, dtype=np.int64)
    rev = np.zeros_like(d)
    for _ in range(m):
        rev = rev * b + d % b
        d //= b
    return rev


def _reversed_block(idx: np.ndarray, b: int, k: int) -> np.ndarray:
    """Radical inverse of int64 ``idx`` (< b**k) truncated to ``k`` digits.

    Digits are reversed ``m`` at a time through a lookup table; the integer
    result is identical to the digit-by-digit loop.
    """
    m = max(1, int(math.log(TABLE_LIMIT) / math.log(b)))
    n = idx.copy()
    rev = np.zeros_like(n)
    left = k
    while left > 0:
        step = min(m, left)
        chunk = b**step
        n, d = np.divmod(n, chunk)
        rev *= chunk
        rev += _reversal_table(b, step)[d]
        left -= step
    return rev / float(b**k)


@dataclass
class PointStream:
    """Seeded, resumable source of points in ``(EPS, 1 - EPS)**dims``.

    Parameters
    ----------
    dims : int
        Dimension of each point.
    kind : str
        One of ``KINDS``.
    seed : int
        Seed for PCG64 (pseudorandom draws or the random start).
    next_index : int
        Cursor; the index of the next point to emit.
    """

    dims: int
    kind: str = "halton"
    seed: int = 0
    next_index: int = 0
    _bases: list[int] = field(init=False, repr=False)
    _offsets: np.ndarray = field(init=False, repr=False)
    _tails: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.dims < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown stream kind {self.kind!r}; expected one of {KINDS}")
        if self.next_index < 0:
            raise ValueError("next_index must be non-negative")
        self._bases = first_primes(self.dims)
        self._offsets = np.zeros(self.dims, dtype=np.int64)
        self._tails = np.zeros(self.dims)
        if self.kind == "random_start_halton":
            start = self.start_point()
            for j, b in enumerate(self._bases):
                # split the start into k leading digits (as an odometer state) and a tail
                k = _digits(b)
                lead = min(int(start[j] * b**k), b**k - 1)
                self._offsets[j] = _reverse_int(lead, b, k)
                self._tails[j] = start[j] - lead / b**k

    def start_point(self) -> np.ndarray:
        """The seed-drawn start of a random-start Halton stream."""
        rng = np.random.Generator(np.random.PCG64(self.seed))
        return rng.random(self.dims)

    def config(self) -> dict:
        """Configuration echoed into reports."""
        out = {"kind": self.kind, "dims": self.dims, "seed": self.seed, "skip": self.next_index}
        if self.kind != "halton":
            out["prng"] = PRNG_ALGORITHM
        return out

    def block(self, start: int, count: int) -> np.ndarray:
        """Points ``start .. start+count-1`` as a ``(count, dims)`` array.

        Does not move the cursor.
        """
        if count < 0 or start < 0:
            raise ValueError("start and count must be non-negative")
        if self.kind == "pseudorandom":
            bitgen = np.random.PCG64(self.seed)
            bitgen.advance(start * self.dims)
            out = np.random.Generator(bitgen).random((count, self.dims))
        else:
            first = start + 1 if self.kind == "halton" else start
            idx = np.arange(first, first + count, dtype=np.int64)
            out = np.empty((count, self.dims))
            for j, b in enumerate(self._bases):
                k = _digits(b)
                n = (idx + self._offsets[j]) % (b**k)
                out[:, j] = _reversed_block(n, b, k) + self._tails[j]
        np.clip(out, EPS, 1.0 - EPS, out=out)
        return out

    def next_points(self, count: int) -> np.ndarray:
        """Emit the next ``count`` points and advance the cursor."""
        out = self.block(self.next_index, count)
        self.next_index += count
        return out

    def next_point(self) -> np.ndarray:
        """Emit a single point of shape ``(dims,)``."""
        return self.next_points(1)[0]

    def fresh(self) -> "PointStream":
        """A copy of this stream with the cursor reset to zero."""
        return PointStream(self.dims, self.kind, self.seed, 0)


def derive_seed(seed: int, *keys: int) -> int:
    """Independent 64-bit seed for a sub-run identified by ``keys``."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint64)[0])


def make_stream(kind: str, dims: int, seed: int = 0, skip: int = 0) -> PointStream:
    return PointStream(dims=dims, kind=kind, seed=seed, next_index=skip)
