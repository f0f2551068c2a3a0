"""Naive-estimator study: CC and MI against the assumption-free bounds.

    python scripts/reproduce_table1.py --n-draws 100000 --threads 4
"""

import argparse
import logging
import time

from mnar_bounds.simulation import Mechanism, SimConfig, run_table1

parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
parser.add_argument("--n-draws", type=int, default=100_000)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--threads", type=int, default=1)
parser.add_argument("--out", default="table1.csv")
args = parser.parse_args()
logging.basicConfig(level=logging.INFO, format="%(message)s")

start = time.perf_counter()
table = run_table1(SimConfig(n_draws=args.n_draws, master_seed=args.seed), list(Mechanism), threads=args.threads)
with open(args.out, "w") as fh:
    fh.write(table.to_csv())
print(table.to_text())
print(f"{time.perf_counter() - start:.1f}s, csv in {args.out}")
