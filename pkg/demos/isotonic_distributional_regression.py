"""Isotonic distributional regression on a totally ordered index.

Fits the stochastically ordered family of conditional CDFs to a small
sample, checks the solver against the classical min-max window formula,
and shows prediction by interpolation between training indices.
"""

import numpy as np

from dimreg import fit, insample_crps, minmax_cdf, predict

rng = np.random.default_rng(7)
n = 12
theta = np.sort(rng.uniform(0.0, 2.0, n))
y = theta + rng.normal(scale=0.6, size=n)

f = fit(theta, y)
print(f"fitted {f.n_indices} index values x {f.n_thresholds} thresholds")
print("each row is a CDF, each column antitonic in the index:")
with np.printoptions(precision=3, suppress=True):
    print(f.cdf)

# The min-max window formula is an independent closed form for the same
# antitonic least squares problem; agreement is bit for bit.
agree = all(
    minmax_cdf(theta, y, j, float(t)) == f.cdf[j, col]
    for j in range(n)
    for col, t in enumerate(f.thresholds)
)
print("\nmin-max formula agrees exactly:", agree)

# In-sample threshold calibration: within each constant block of a fitted
# column, the fitted value is the mean of the event indicators.
col = f.n_thresholds // 2
t = f.thresholds[col]
values = f.cdf[:, col]
print(f"\ncolumn at threshold {t:.3f}:")
start = 0
for i in range(1, n + 1):
    if i == n or values[i] != values[start]:
        block_mean = np.mean(y[start:i] <= t)
        print(
            f"  block rows {start}..{i - 1}: fitted {values[start]:.4f}, "
            f"indicator mean {block_mean:.4f}"
        )
        start = i

# Prediction at a new index interpolates the two neighbouring rows
# linearly in the index, and clamps outside the training range.
u = float(0.5 * (theta[3] + theta[4]))
d = predict(f, u)
print(f"\npredictive CDF at u = {u:.3f}: {d.n_points} jumps")
print("median:", d.quantile(0.5), " 90% quantile:", d.quantile(0.9))
print("below training range equals the lowest-index fit:",
      predict(f, -10.0) == predict(f, float(theta[0])))

print("\nmean in-sample CRPS:", insample_crps(f, theta, y))
