"""Sensitivity-analysis study: analysts off by a factor f from the true parameters.

    python scripts/reproduce_table2.py --n-draws 100000 --factors 0.9 1 1.1 1.2
"""

import argparse
import time

from mnar_bounds.simulation import PAPER_FACTORS, SimConfig, run_table2

parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
parser.add_argument("--n-draws", type=int, default=100_000)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--threads", type=int, default=1)
parser.add_argument("--factors", type=float, nargs="+", default=list(PAPER_FACTORS))
parser.add_argument("--out", default="table2.csv")
args = parser.parse_args()

start = time.perf_counter()
table = run_table2(SimConfig(n_draws=args.n_draws, master_seed=args.seed), args.factors, threads=args.threads)
with open(args.out, "w") as fh:
    fh.write(table.to_csv())
print(table.to_text())
print(f"{time.perf_counter() - start:.1f}s, csv in {args.out}")
