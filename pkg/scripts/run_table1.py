"""Seven-dimensional estimator comparison (CR, SAR1, SAR2, AR) for MC and QMC.

    python3 scripts/run_table1.py [--sizes 256,1024,4096,16384] [--reps 64] [--out results/table1.csv]
"""

import argparse
import pathlib

from qmcar import experiments as ex
from qmcar.cli import emit_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default=",".join(map(str, ex.INTEGRAL_SIZES)))
    ap.add_argument("--reps", type=int, default=ex.INTEGRAL_REPS)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=ex.TIMING_REPEATS)
    ap.add_argument("--out", default="results/table1.csv")
    args = ap.parse_args()
    cfg = ex.ExperimentConfig("bench-integral", seed=args.seed, reps=args.reps, repeats=args.repeats,
                              sizes=tuple(int(s) for s in args.sizes.split(",")))
    rows = ex.run_benchmark(cfg)
    pathlib.Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit_rows(rows, "csv", args.out)
    print(f"{'N':>6} {'stream':<20} {'est':<5} {'std':>10} {'eff':>10} {'time':>8}")
    for r in rows:
        print(f"{r['n']:>6} {r['stream']:<20} {r['estimator']:<5} {r['std_dev']:>10.3e} "
              f"{r['efficiency']:>10.4g} {r['time_seconds']:>8.3f}")
    for name, ok, detail in ex.check_rows("bench-integral", rows):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


if __name__ == "__main__":
    main()
