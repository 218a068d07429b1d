"""Step distributions and exact proper scoring.

Every predictive object in dimreg is a right-continuous step CDF.  This
walkthrough builds a few by hand and shows the exact scoring machinery:
CRPS in closed form, weighted CRPS against a discrete threshold measure,
quantiles as generalized inverses, randomized PIT, and CDF averaging.
"""

import numpy as np

from dimreg import StepDistribution, ThresholdMeasure, mixture

# A two-step distribution: mass 0.5 at 0 and mass 0.5 at 1.
d = StepDistribution(np.array([0.0, 1.0]), np.array([0.5, 1.0]))
print("jump points:  ", d.points)
print("cum. probs:   ", d.cumprobs)
print("F(0.5) =", d.cdf(0.5), "   F(1-) =", d.cdf_left(1.0), "   F(1) =", d.cdf(1.0))

# Quantiles are the smallest locations reaching the target probability.
for alpha in (0.25, 0.5, 0.75):
    print(f"q({alpha}) = {d.quantile(alpha)}")

# CRPS is computed exactly over the partition induced by the jumps, never
# by numerical quadrature.  For this distribution and y = 0 the squared
# CDF error is 0.25 on (0, 1) and zero elsewhere.
print("\nCRPS(d, 0) =", d.crps(0.0))
print("CRPS(d, 2) =", d.crps(2.0))

# A point mass scores zero against its own location and |y - c| elsewhere,
# which is why the CRPS of a point forecast is its absolute error.
pm = StepDistribution.point_mass(2.0)
print("CRPS(point mass at 2, 2.0) =", pm.crps(2.0))
print("CRPS(point mass at 2, 3.5) =", pm.crps(3.5), "= |3.5 - 2|")

# Weighted CRPS: restrict attention to a few decision-relevant thresholds.
mu = ThresholdMeasure.discrete([0.5, 1.5], [1.0, 2.0])
print("\nweighted CRPS at thresholds {0.5, 1.5}:", d.crps_weighted(0.0, mu))
print("Lebesgue measure recovers the plain CRPS:",
      d.crps_weighted(0.0, ThresholdMeasure.lebesgue()) == d.crps(0.0))

# The randomized PIT is uniform when the observation is drawn from the
# forecast itself; at a jump it spreads the point mass with a uniform draw.
rng = np.random.default_rng(1)
probs = np.diff(np.concatenate(([0.0], d.cumprobs)))
ys = rng.choice(d.points, size=50_000, p=probs)
pit = np.array([d.pit(y, v) for y, v in zip(ys, rng.random(ys.size))])
counts, _ = np.histogram(pit, bins=10, range=(0, 1))
print("\nPIT decile counts under self-sampling (should be flat):")
print(counts)

# Mixtures average CDFs pointwise on the union of jump points.
m = mixture([StepDistribution.point_mass(0.0), StepDistribution.point_mass(1.0)])
print("\nmixture of point masses at 0 and 1:")
print("points  ", m.points)
print("cumprobs", m.cumprobs)
