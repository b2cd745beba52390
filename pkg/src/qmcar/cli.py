"""Command line entry point: ``qmcar <subcommand> [options]``.

Exit status is 0 on success, 1 on bad input and 2 when ``--check`` finds a
failing check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import distributions as dists
from . import experiments as ex
from .gof import AD_CRITICAL, GofReport, anderson_darling, f_star_discrepancy
from .vg import METHODS as VG_METHODS

MAGIC = b"QMCAR\0\0\x01"
STREAM_CHOICES = ("mc", "qmc", "halton", "pseudorandom", "random_start_halton")


# sample files


def write_sample(path: str | None, sample: np.ndarray, binary: bool) -> None:
    x = np.asarray(sample, dtype="<f8").ravel()
    if binary:
        if path is None:
            raise ValueError("binary output needs --out")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(x.tobytes())
        return
    text = "".join(f"{v!r}\n" for v in x.tolist())
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_sample(path: str) -> np.ndarray:
    """Read a sample written by :func:`write_sample`; the format is sniffed."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw.startswith(MAGIC):
        body = raw[len(MAGIC):]
        if len(body) % 8:
            raise ValueError(f"{path}: truncated binary sample")
        return np.frombuffer(body, dtype="<f8").astype(float)
    return np.array([float(tok) for tok in raw.decode().split()], dtype=float)


# reports


def emit_rows(rows: list[dict], fmt: str, path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2, default=_jsonable) + "\n"
    else:
        fields: list[str] = []
        for r in rows:
            fields.extend(k for k in r if k not in fields)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in fields})
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _report_checks(checks) -> int:
    failed = 0
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=sys.stderr)
        failed += not ok
    return 2 if failed else 0


# subcommands


def cmd_gen(args) -> int:
    dist = dists.parse_distribution(args.dist)
    rep = ex.generate_sample(dist, args.method, args.stream, args.n, args.seed, args.skip, args.tol)
    write_sample(args.out, rep.sample, args.binary)
    summary = json.dumps({**rep.summary(), "seed": args.seed}, default=_jsonable)
    print(summary, file=sys.stdout if args.out else sys.stderr)
    if args.check:
        return _report_checks([("A2 below the 5% point", rep.a2 < AD_CRITICAL["5%"], f"{rep.a2:.4g}")])
    return 0


def cmd_gof(args) -> int:
    dist = dists.parse_distribution(args.dist)
    x = read_sample(args.sample)
    if args.statistic == "a2":
        report = GofReport("anderson_darling", anderson_darling(x, dist), int(x.size))
    else:
        report = GofReport("f_star_discrepancy", f_star_discrepancy(x, dist), int(x.size), {})
    print(json.dumps({**report.to_dict(), "distribution": dist.label()}))
    if args.check and report.reference_points:
        return _report_checks([("A2 below the 5% point", report.passes("5%"),
                                f"{report.value:.4g} vs {AD_CRITICAL['5%']}")])
    return 0


def _bench_config(args) -> ex.ExperimentConfig:
    streams = ("mc", "qmc") if args.stream == "both" else (args.stream,)
    methods = tuple(m.strip() for m in args.method.split(",")) if args.method else None
    kwargs = dict(subcommand=args.command, streams=streams, seed=args.seed, n=args.n, reps=args.reps,
                  methods=methods, paper_scale=args.paper_scale, tol=args.tol, workers=args.workers,
                  repeats=args.repeats)
    if getattr(args, "maturities", None):
        kwargs["maturities"] = tuple(float(t) for t in args.maturities.split(","))
    return ex.ExperimentConfig(**kwargs)


def cmd_bench(args) -> int:
    config = _bench_config(args)
    rows = ex.run_benchmark(config)
    emit_rows(rows, args.format, args.out)
    if args.check:
        return _report_checks(ex.check_rows(args.command, rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmcar", description="Acceptance-rejection with low-discrepancy streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default=None):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--n", type=int, default=n_default, help="sample size (paths for price-vg)")
        p.add_argument("--out", default=None, help="output path; stdout when omitted")
        p.add_argument("--tol", type=float, default=dists.DEFAULT_TOL, help="inverse-CDF tolerance")
        p.add_argument("--check", action="store_true", help="exit with status 2 if a check fails")

    g = sub.add_parser("gen", help="generate a sample")
    common(g, 1000)
    g.add_argument("--dist", required=True, help="e.g. beta:0.5,0.5  gamma:2.4,1  normal  exp:1")
    g.add_argument("--method", choices=("inverse", "ar"), default="ar")
    g.add_argument("--stream", choices=STREAM_CHOICES, default="qmc")
    g.add_argument("--skip", type=int, default=0, help="start index in the stream")
    g.add_argument("--binary", action="store_true", help="little-endian float64 with an 8-byte header")
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("gof", help="goodness of fit of a sample file")
    f.add_argument("sample")
    f.add_argument("--dist", required=True)
    f.add_argument("--statistic", choices=("a2", "fstar"), default="a2")
    f.add_argument("--check", action="store_true")
    f.set_defaults(func=cmd_gof)

    for name, help_text in (("bench-integral", "seven-dimensional CR/AR/SAR comparison"),
                            ("bench-beta", "beta inverse vs AR sweep"),
                            ("bench-gamma", "gamma inverse vs AR sweeps"),
                            ("price-vg", "variance gamma European calls")):
        b = sub.add_parser(name, help=help_text)
        common(b)
        b.add_argument("--stream", choices=("mc", "qmc", "both"), default="both")
        b.add_argument("--method", default=None, help="comma-separated subset of methods")
        b.add_argument("--reps", type=int, default=None)
        b.add_argument("--format", choices=("csv", "json"), default="csv")
        b.add_argument("--paper-scale", action="store_true", help="full-size runs: 1e6 gamma variates, 100 VG replications")
        b.add_argument("--workers", type=int, default=1)
        b.add_argument("--repeats", type=int, default=ex.TIMING_REPEATS, help="timing repeats (median)")
        if name == "price-vg":
            b.add_argument("--maturities", default=None, help="comma-separated, default 0.25,0.5,0.75,1")
        b.set_defaults(func=cmd_bench)
    return parser


def _validate_methods(args) -> None:
    if getattr(args, "method", None) is None or args.command in ("gen",):
        return
    allowed = {
        "bench-integral": ("cr", "sar1", "sar2", "ar"),
        "bench-beta": ("inverse", "ar"),
        "bench-gamma": ("inverse", "ar"),
        "price-vg": VG_METHODS,
    }[args.command]
    for m in args.method.split(","):
        if m.strip() not in allowed:
            raise ValueError(f"unknown method {m.strip()!r} for {args.command}; choose from {allowed}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate_methods(args)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"qmcar {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
