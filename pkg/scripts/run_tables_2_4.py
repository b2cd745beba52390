"""Beta and gamma generation sweeps: inversion vs acceptance-rejection, MC vs QMC.

    python3 scripts/run_tables_2_4.py [--n 100000] [--paper-scale] [--out results/tables_2_4.csv]
"""

import argparse
import pathlib

from qmcar import experiments as ex
from qmcar.cli import emit_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=None, help="sample size per cell (default 1e5)")
    ap.add_argument("--paper-scale", action="store_true", help="1e6 variates for the gamma tables")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=ex.TIMING_REPEATS)
    ap.add_argument("--out", default="results/tables_2_4.csv")
    args = ap.parse_args()
    rows = []
    for sub in ("bench-beta", "bench-gamma"):
        cfg = ex.ExperimentConfig(sub, seed=args.seed, n=args.n, paper_scale=args.paper_scale, repeats=args.repeats)
        rows += ex.run_benchmark(cfg)
    pathlib.Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_rows(rows, "csv", args.out)
    print(f"{'table':<5} {'params':<8} {'stream':<20} {'method':<8} {'time':>8} {'A2':>8}")
    for r in rows:
        print(f"{r['table']:<5} {r['params']:<8} {r['stream']:<20} {r['method']:<8} "
              f"{r['time_seconds']:>8.3f} {r['a2']:>8.3f}")
    for name, ok, detail in ex.check_rows("bench-gamma", rows):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


if __name__ == "__main__":
    main()
