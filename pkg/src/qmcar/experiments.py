"""Benchmark sweeps behind the ``bench-*`` and ``price-vg`` subcommands.

Each sweep returns a list of flat dict rows. Every row carries the run
metadata from :func:`row_meta`; re-running a config reproduces every field
except ``time_seconds`` and ``timestamp``.
"""

from __future__ import annotations

import datetime as _dt
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata

import numpy as np

from . import distributions as dists
from . import integral, vg
from .gof import anderson_darling, efficiency, f_star_discrepancy, timed
from .lds import PointStream, derive_seed
from .samplers import beta_aw, gamma_route, gamma_sample

SUBCOMMANDS = ("gen", "gof", "bench-integral", "bench-beta", "bench-gamma", "price-vg")
STREAM_LABELS = {"mc": "pseudorandom", "qmc": "random_start_halton"}

INTEGRAL_SIZES = (256, 1024, 4096, 16384)
INTEGRAL_REPS = 64
BETA_GRID = tuple((a, b) for a in (0.3, 0.5, 0.7) for b in (0.3, 0.5, 0.7))
GAMMA_ABOVE_ONE = (1.6, 2.0, 2.4, 2.8, 3.2)
GAMMA_BELOW_ONE = (0.2, 0.4, 0.6, 0.8)
DEFAULT_SAMPLE_SIZE = 100_000
FULL_GAMMA_SAMPLE_SIZE = 1_000_000
DEFAULT_VG_REPS = 20
FULL_VG_REPS = 100
VG_PATHS = 10_000
TIMING_REPEATS = 5
TIMING_NOTE = ("median wall time of repeated runs; includes stream generation and transform, "
               "excludes process startup, stream construction and normalizer quadrature")


def code_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class ExperimentConfig:
    """Options for one sweep; ``None`` sizes fall back to the scaled defaults."""

    subcommand: str
    streams: tuple[str, ...] = ("mc", "qmc")
    seed: int = 0
    n: int | None = None
    reps: int | None = None
    methods: tuple[str, ...] | None = None
    maturities: tuple[float, ...] = vg.TABLE5_MATURITIES
    sizes: tuple[int, ...] = INTEGRAL_SIZES
    paper_scale: bool = False
    tol: float = dists.DEFAULT_TOL
    workers: int = 1
    repeats: int = TIMING_REPEATS
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        for s in self.streams:
            if s not in STREAM_LABELS:
                raise ValueError(f"stream must be one of {tuple(STREAM_LABELS)}, got {s!r}")
        for name in ("n", "reps"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        if self.workers < 1 or self.repeats < 1 or self.tol <= 0:
            raise ValueError("workers, repeats and tol must be positive")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be positive")


def row_meta(config: ExperimentConfig, stream: str | None = None) -> dict:
    return {
        "seed": config.seed,
        "stream": STREAM_LABELS.get(stream, stream),
        "tolerance": config.tol,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "version": code_version(),
        "workers": config.workers,
        "timing": TIMING_NOTE,
    }


def run_benchmark(config: ExperimentConfig) -> list[dict]:
    runners = {
        "bench-integral": bench_integral,
        "bench-beta": bench_beta,
        "bench-gamma": bench_gamma,
        "price-vg": price_vg,
    }
    if config.subcommand not in runners:
        raise ValueError(f"{config.subcommand!r} is not a benchmark")
    return runners[config.subcommand](config)


# seven-dimensional integral


def integral_cell(estimator: str, stream: str, n: int, reps: int, seed: int, repeats: int) -> dict:
    kind = STREAM_LABELS[stream]
    dims = integral.stream_dims(estimator)
    streams = [PointStream(dims, kind, derive_seed(seed, n, m)) for m in range(reps)]

    def run():
        return [integral.estimate(estimator, s.fresh(), n) for s in streams]

    out, t = timed(run, repeats)
    est = np.array([v for v, _ in out])
    return {
        "estimator": estimator,
        "n": n,
        "reps": reps,
        "mean": float(est.mean()),
        "std_dev": float(est.std(ddof=1)),
        "error": float(est.mean() - integral.REFERENCE_INTEGRAL),
        "candidates": int(sum(c for _, c in out)),
        "time_seconds": t,
    }


def bench_integral(config: ExperimentConfig) -> list[dict]:
    reps = config.reps or INTEGRAL_REPS
    methods = config.methods or integral.ESTIMATORS
    integral.normalizer()  # quadrature outside the timed region
    sizes = (config.n,) if config.n else config.sizes
    rows = []
    for n in sizes:
        cells = {}
        # CR-MC is the normalizing reference even when not requested
        base = integral_cell("cr", "mc", n, reps, config.seed, config.repeats)
        for stream in config.streams:
            for est in methods:
                if est == "cr" and stream == "mc":
                    cells[(stream, est)] = base
                else:
                    cells[(stream, est)] = integral_cell(est, stream, n, reps, config.seed, config.repeats)
        for (stream, est), cell in cells.items():
            eff = efficiency(base["std_dev"], base["time_seconds"], cell["std_dev"], cell["time_seconds"])
            if stream == "mc" and est == "cr":
                eff = 1.0
            rows.append({"table": "1", **cell, "efficiency": eff, "reference": integral.REFERENCE_INTEGRAL,
                         **row_meta(config, stream)})
    return rows


# Tables 2-4


def _inverse_run(dist, kind, seed, n, tol):
    def run():
        return dists.sample_by_inversion(dist, PointStream(1, kind, seed), n, tol)
    return run


def generation_cell(family: str, params: tuple, method: str, stream: str, n: int, seed: int,
                    tol: float, repeats: int) -> dict:
    """Generate ``n`` variates one way and score them against the exact CDF."""
    kind = STREAM_LABELS[stream]
    if family == "beta":
        dist = dists.beta(*params)
        dims = 2
    else:
        dist = dists.gamma(params[0])
        dims = gamma_route(params[0])[1]
    ratio = None
    if method == "inverse":
        sample, t = timed(_inverse_run(dist, kind, seed, n, tol), repeats)
    elif method == "ar":
        if family == "beta":
            fn = lambda: beta_aw(*params, PointStream(2, kind, seed), count=n)  # noqa: E731
        else:
            fn = lambda: gamma_sample(params[0], 1.0, PointStream(dims, kind, seed), n)  # noqa: E731
        rec, t = timed(fn, repeats)
        sample, ratio = rec.accepted, rec.acceptance_ratio
    else:
        raise ValueError(f"method must be 'inverse' or 'ar', got {method!r}")
    return {
        "family": family,
        "params": ",".join(f"{p:g}" for p in params),
        "method": method,
        "n": n,
        "time_seconds": t,
        "a2": anderson_darling(sample, dist),
        "f_star": f_star_discrepancy(sample, dist),
        "acceptance_ratio": ratio,
        "mean": float(np.mean(sample)),
    }


def _generation_sweep(config: ExperimentConfig, table: str, family: str, grid, n: int) -> list[dict]:
    methods = config.methods or ("inverse", "ar")
    rows = []
    for ci, params in enumerate(grid):
        for stream in config.streams:
            for mi, method in enumerate(methods):
                seed = derive_seed(config.seed, int(table), ci, mi, int(stream == "qmc"))
                cell = generation_cell(family, params, method, stream, n, seed, config.tol, config.repeats)
                rows.append({"table": table, **cell, **row_meta(config, stream), "cell_seed": seed})
    return rows


def bench_beta(config: ExperimentConfig) -> list[dict]:
    n = config.n or DEFAULT_SAMPLE_SIZE
    return _generation_sweep(config, "2", "beta", config.extra.get("grid", BETA_GRID), n)


def bench_gamma(config: ExperimentConfig) -> list[dict]:
    n = config.n or (FULL_GAMMA_SAMPLE_SIZE if config.paper_scale else DEFAULT_SAMPLE_SIZE)
    above = config.extra.get("above", GAMMA_ABOVE_ONE)
    below = config.extra.get("below", GAMMA_BELOW_ONE)
    rows = _generation_sweep(config, "3", "gamma", [(a,) for a in above], n)
    rows += _generation_sweep(config, "4", "gamma", [(a,) for a in below], n)
    return rows


# Table 5


def price_vg(config: ExperimentConfig) -> list[dict]:
    params = vg.VGParams(**config.extra.get("vg", {}))
    reps = config.reps or (FULL_VG_REPS if config.paper_scale else DEFAULT_VG_REPS)
    paths = config.n or VG_PATHS
    methods = config.methods or vg.METHODS
    rows = []
    for T in config.maturities:
        option = vg.OptionSpec(maturity=T, **config.extra.get("option", {}))
        exact = vg.exact_call_price(params, option)
        for method in methods:
            rep = vg.price_european_call(params, option, method, paths, reps, config.seed, config.workers, config.tol)
            stream = "mc" if method.endswith("_mc") else "qmc"
            rows.append({
                "table": "5",
                "maturity": T,
                "exact": exact,
                "method": method,
                "price": rep.price,
                "std_dev": rep.std_dev,
                "time_seconds": rep.time_seconds,
                "paths": paths,
                "reps": reps,
                **row_meta(config, stream),
                "timing": "total wall time of all replications in one run",
                "gamma_route": rep.meta.get("gamma_route"),
                "rejection_policy": rep.meta.get("rejection_policy"),
            })
    return rows


def config_dict(config: ExperimentConfig) -> dict:
    return asdict(config)


# single samples


@dataclass
class SampleReport:
    """A generated sample with its fit statistics and timing."""

    sample: np.ndarray = field(repr=False)
    distribution: str
    method: str
    stream: dict
    a2: float
    f_star: float
    acceptance_ratio: float | None
    time_seconds: float
    tolerance: float | None

    def summary(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "sample"}
        d["n"] = int(self.sample.size)
        return d


def generate_sample(dist: dists.DistributionSpec, method: str, stream: str, n: int, seed: int = 0,
                    skip: int = 0, tol: float = dists.DEFAULT_TOL) -> SampleReport:
    """``n`` variates from ``dist`` by inversion or by the matching AR sampler.

    ``stream`` is ``mc``, ``qmc``, ``halton`` or a full stream-kind name.
    """
    kind = STREAM_LABELS.get(stream, stream)
    ratio = None
    if method == "inverse":
        s = PointStream(1, kind, seed, skip)
        t0 = time.perf_counter()
        sample = np.asarray(dists.sample_by_inversion(dist, s, n, tol))
    elif method == "ar":
        if dist.family == "beta":
            s = PointStream(2, kind, seed, skip)
            t0 = time.perf_counter()
            rec = beta_aw(*dist.params, s, count=n)
        elif dist.family == "gamma":
            s = PointStream(gamma_route(dist.params[0])[1], kind, seed, skip)
            t0 = time.perf_counter()
            rec = gamma_sample(dist.params[0], dist.params[1], s, n)
        else:
            raise ValueError(f"no acceptance-rejection sampler for {dist.family}; use method 'inverse'")
        sample, ratio = rec.accepted, rec.acceptance_ratio
    else:
        raise ValueError(f"method must be 'inverse' or 'ar', got {method!r}")
    elapsed = time.perf_counter() - t0
    config = PointStream(s.dims, kind, seed, skip).config()
    return SampleReport(sample, dist.label(), method, config, anderson_darling(sample, dist),
                        f_star_discrepancy(sample, dist), ratio, elapsed,
                        tol if method == "inverse" else None)


# pass/fail checks used by ``--check``


def check_rows(subcommand: str, rows: list[dict]) -> list[tuple[str, bool, str]]:
    """Named pass/fail results for a sweep's rows."""
    out = []
    if subcommand == "bench-integral":
        for n in sorted({r["n"] for r in rows}):
            cell = {r["estimator"]: r for r in rows if r["n"] == n and r["stream"] == STREAM_LABELS["qmc"]}
            if {"cr", "ar"} <= set(cell):
                ok = cell["ar"]["std_dev"] <= 0.5 * cell["cr"]["std_dev"]
                out.append((f"N={n} qmc ar std <= cr std / 2", ok,
                            f"{cell['ar']['std_dev']:.3g} vs {cell['cr']['std_dev']:.3g}"))
            for sar in ("sar1", "sar2"):
                if {"ar", sar} <= set(cell):
                    ok = cell["ar"]["efficiency"] > cell[sar]["efficiency"]
                    out.append((f"N={n} qmc ar efficiency > {sar}", ok,
                                f"{cell['ar']['efficiency']:.4g} vs {cell[sar]['efficiency']:.4g}"))
    elif subcommand in ("bench-beta", "bench-gamma"):
        worst = max(rows, key=lambda r: r["a2"])
        out.append(("all A2 < 2.49", worst["a2"] < 2.49,
                    f"max {worst['a2']:.3g} ({worst['params']}, {worst['method']}, {worst['stream']})"))
        key = lambda r: (r["table"], r["params"], r["method"])  # noqa: E731
        mc = {key(r): r for r in rows if r["stream"] == STREAM_LABELS["mc"]}
        qmc = {key(r): r for r in rows if r["stream"] == STREAM_LABELS["qmc"]}
        shared = sorted(set(mc) & set(qmc))
        if shared:
            better = sum(qmc[k]["a2"] < mc[k]["a2"] for k in shared)
            out.append(("qmc A2 < mc A2 in >= 80% of cells", better >= 0.8 * len(shared),
                        f"{better}/{len(shared)}"))
        times = {}
        for r in rows:
            times.setdefault((r["table"], r["params"], r["stream"]), {})[r["method"]] = r["time_seconds"]
        pairs = [(k, v["inverse"] / v["ar"]) for k, v in times.items() if {"inverse", "ar"} <= set(v)]
        if pairs:
            k, f = min(pairs, key=lambda kv: kv[1])
            out.append(("ar at least 3x faster than inverse", f >= 3.0, f"smallest factor {f:.3g} at {k}"))
    elif subcommand == "price-vg":
        for r in rows:
            if r["method"] in ("ar_qmc", "inverse_qmc"):
                ref = vg.TABLE5_EXACT.get(r["maturity"], r["exact"])
                ok = abs(r["price"] - ref) <= 0.02 and r["std_dev"] <= 0.02
                out.append((f"T={r['maturity']} {r['method']} within 0.02 of {ref}", ok,
                            f"price {r['price']:.4f}, std {r['std_dev']:.2e}"))
    return out
