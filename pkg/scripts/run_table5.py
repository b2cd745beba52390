"""Variance gamma European call prices for four maturities and four methods.

    python3 scripts/run_table5.py [--paths 10000] [--reps 20] [--paper-scale] [--workers 1]
"""

import argparse
import pathlib

from qmcar import experiments as ex
from qmcar.cli import emit_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=ex.VG_PATHS)
    ap.add_argument("--reps", type=int, default=None, help="default 20, or 100 with --paper-scale")
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/table5.csv")
    args = ap.parse_args()
    cfg = ex.ExperimentConfig("price-vg", seed=args.seed, n=args.paths, reps=args.reps,
                              paper_scale=args.paper_scale, workers=args.workers)
    rows = ex.run_benchmark(cfg)
    pathlib.Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_rows(rows, "csv", args.out)
    print(f"{'T':>5} {'exact':>7} {'method':<12} {'price':>8} {'std':>9} {'time':>7}")
    for r in rows:
        print(f"{r['maturity']:>5} {r['exact']:>7.3f} {r['method']:<12} {r['price']:>8.4f} "
              f"{r['std_dev']:>9.2e} {r['time_seconds']:>7.2f}")
    for name, ok, detail in ex.check_rows("price-vg", rows):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


if __name__ == "__main__":
    main()
