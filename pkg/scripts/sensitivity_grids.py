"""Risk-ratio bound surfaces over the feasible sensitivity parameters of the
worked example, written as two CSV files (lower and upper bound)."""

import argparse

import numpy as np

from mnar_bounds import ContrastKind, observed_law, sensitivity_grid, true_sensitivity_params
from mnar_bounds.example import example_model

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--resolution", type=int, default=101)
parser.add_argument("--prefix", default="grid")
args = parser.parse_args()

model = example_model()
lower, upper = sensitivity_grid(observed_law(model), ContrastKind.RISK_RATIO, args.resolution)
lower.to_csv(f"{args.prefix}_lower.csv")
upper.to_csv(f"{args.prefix}_upper.csv")

truth = true_sensitivity_params(model)
print(f"lower bound, alpha(0) in [0, {lower.alpha_axis[-1]:.3f}], beta(1) in [{lower.beta_axis[0]:.3f}, 1]")
print(f"  range {np.nanmin(lower.values):.3f} .. {np.nanmax(lower.values):.3f}")
print(f"  at true (alpha(0), beta(1)) = ({truth.alpha[0]:.2f}, {truth.beta[1]:.2f}): "
      f"{lower.nearest(truth.alpha[0], truth.beta[1]):.3f}")
print(f"  at (0.4, 0.4): {lower.nearest(0.4, 0.4):.3f}")
print(f"upper bound, alpha(1) in [0, {upper.alpha_axis[-1]:.3f}], beta(0) in [{upper.beta_axis[0]:.3f}, 1]")
print(f"  range {np.nanmin(upper.values):.3f} .. {np.nanmax(upper.values):.3f}")
print(f"  at true (alpha(1), beta(0)) = ({truth.alpha[1]:.2f}, {truth.beta[0]:.2f}): "
      f"{upper.nearest(truth.alpha[1], truth.beta[0]):.3f}")
