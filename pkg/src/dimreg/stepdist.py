"""Right-continuous step distribution functions and exact computations on them.

A :class:`StepDistribution` is a probability distribution on the real line
with finitely many atoms, represented by its jump locations and cumulative
probabilities.  It is the universal predictive object of this package: every
fitted or predicted conditional distribution is one of these.  All scoring
operations (CRPS, weighted CRPS, PIT) are computed in closed form over the
finite partition induced by the jump points; no numerical quadrature is
involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "StepDistribution",
    "ThresholdMeasure",
    "mixture",
]

#: Slack allowed on "the final cumulative probability equals one".
FINAL_PROB_TOL = 1e-12


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True)
class StepDistribution:
    """Distribution with CDF ``F(y) = cumprobs[i]`` for the largest ``points[i] <= y``.

    Parameters
    ----------
    points : array-like
        Strictly increasing, finite jump locations.
    cumprobs : array-like
        Cumulative probabilities at the jump locations; strictly increasing,
        contained in ``(0, 1]``, with the final value equal to one (within
        ``1e-12``; the final value is treated as exactly one by all
        operations).

    Notes
    -----
    Instances are immutable after construction; the backing arrays are
    marked read-only.  Every method is a pure function, so values can be
    shared freely between threads.
    """

    points: np.ndarray
    cumprobs: np.ndarray

    def __post_init__(self):
        points = _as_float_array(self.points, "points")
        cumprobs = _as_float_array(self.cumprobs, "cumprobs")
        if points.size == 0:
            raise ValueError("a step distribution needs at least one jump point")
        if points.size != cumprobs.size:
            raise ValueError("points and cumprobs must have equal length")
        if not np.all(np.isfinite(points)):
            raise ValueError("jump points must be finite")
        if not np.all(np.isfinite(cumprobs)):
            raise ValueError("cumulative probabilities must be finite")
        if points.size > 1 and not np.all(np.diff(points) > 0):
            raise ValueError("jump points must be strictly increasing")
        if points.size > 1 and not np.all(np.diff(cumprobs) > 0):
            raise ValueError("cumulative probabilities must be strictly increasing")
        if cumprobs[0] <= 0.0:
            raise ValueError("cumulative probabilities must be positive")
        if abs(cumprobs[-1] - 1.0) > FINAL_PROB_TOL:
            raise ValueError(
                f"final cumulative probability must be 1, got {cumprobs[-1]!r}"
            )
        if np.any(cumprobs > 1.0 + FINAL_PROB_TOL):
            raise ValueError("cumulative probabilities must not exceed 1")
        points.setflags(write=False)
        cumprobs.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "cumprobs", cumprobs)

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def point_mass(cls, location: float) -> "StepDistribution":
        """Distribution putting all mass at ``location``."""
        return cls(np.array([float(location)]), np.array([1.0]))

    @classmethod
    def from_cdf_values(cls, points, values) -> "StepDistribution":
        """Build a distribution from nondecreasing CDF values on a grid.

        Plateaus are coalesced: only the grid points where the CDF strictly
        increases become jump points.  The final value must be one up to
        ``1e-9`` and is snapped to exactly one.
        """
        points = _as_float_array(points, "points")
        values = _as_float_array(values, "values")
        if points.size != values.size or points.size == 0:
            raise ValueError("points and values must be nonempty with equal length")
        if abs(values[-1] - 1.0) > 1e-9:
            raise ValueError("final CDF value must be 1 within 1e-9")
        values = np.minimum(np.maximum(values, 0.0), 1.0)
        values[-1] = 1.0
        keep = np.empty(values.size, dtype=bool)
        keep[0] = values[0] > 0.0
        np.greater(values[1:], values[:-1], out=keep[1:])
        return cls(points[keep], values[keep])

    @classmethod
    def from_sample(cls, sample) -> "StepDistribution":
        """Empirical CDF of a finite sample (duplicates pooled)."""
        sample = _as_float_array(sample, "sample")
        if sample.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(sample)):
            raise ValueError("sample values must be finite")
        points, counts = np.unique(sample, return_counts=True)
        cum = np.cumsum(counts)
        return cls(points, cum / cum[-1])

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def cdf(self, y):
        """Right-continuous CDF value ``F(y)``; accepts scalars or arrays."""
        yv = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.points, yv, side="right")
        out = np.where(idx > 0, self.cumprobs[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if yv.ndim == 0 else out

    def cdf_left(self, y):
        """Left limit ``F(y-)``; accepts scalars or arrays."""
        yv = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.points, yv, side="left")
        out = np.where(idx > 0, self.cumprobs[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if yv.ndim == 0 else out

    def quantile(self, alpha):
        """Smallest jump location with cumulative probability >= ``alpha``.

        ``alpha`` must lie in the open interval (0, 1); arrays are accepted.
        """
        av = np.asarray(alpha, dtype=float)
        if np.any(av <= 0.0) or np.any(av >= 1.0):
            raise ValueError("alpha must lie strictly between 0 and 1")
        idx = np.searchsorted(self.cumprobs, av, side="left")
        # the final cumulative probability is treated as exactly one
        idx = np.minimum(idx, self.points.size - 1)
        out = self.points[idx]
        return float(out) if av.ndim == 0 else out

    # ------------------------------------------------------------------
    # scoring
    # ------------------------------------------------------------------

    def crps(self, y: float) -> float:
        """Continuous ranked probability score against observation ``y``.

        Exact value of the integral of ``(F(z) - 1{y <= z})**2``, obtained by
        summing the piecewise-constant integrand over the partition induced
        by the jump points and ``y``.
        """
        y = float(y)
        if not np.isfinite(y):
            raise ValueError("observation must be finite")
        cuts = np.unique(np.append(self.points, y))
        if cuts.size == 1:
            return 0.0
        left = cuts[:-1]
        # F and the indicator are both right-continuous, hence constant on
        # each open segment and equal to their value at its left endpoint.
        diff = self.cdf(left) - (left >= y)
        return float(np.sum(diff * diff * np.diff(cuts)))

    def crps_weighted(self, y: float, mu: "ThresholdMeasure") -> float:
        """CRPS with the threshold integral taken against the measure ``mu``."""
        if mu.kind == "lebesgue":
            return self.crps(y)
        if mu.locations.size == 0:
            return 0.0
        diff = self.cdf(mu.locations) - (mu.locations >= y)
        return float(np.dot(mu.weights, diff * diff))

    def pit(self, y: float, v: float) -> float:
        """Randomized probability integral transform ``F(y-) + v*(F(y) - F(y-))``."""
        v = float(v)
        if not 0.0 <= v <= 1.0:
            raise ValueError("v must lie in [0, 1]")
        lo = self.cdf_left(y)
        hi = self.cdf(y)
        return lo + v * (hi - lo)

    # ------------------------------------------------------------------
    # misc
    # ------------------------------------------------------------------

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepDistribution):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.cumprobs, other.cumprobs
        )

    def __hash__(self):
        return hash((self.points.tobytes(), self.cumprobs.tobytes()))


@dataclass(frozen=True)
class ThresholdMeasure:
    """Measure on the threshold axis used by the weighted CRPS.

    ``kind`` is either ``"lebesgue"`` (the plain CRPS) or ``"discrete"``
    with finite, nonnegative weights on a finite set of locations.
    """

    kind: str
    locations: np.ndarray = field(default_factory=lambda: np.empty(0))
    weights: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        if self.kind not in ("lebesgue", "discrete"):
            raise ValueError(f"unknown measure kind: {self.kind!r}")
        locations = _as_float_array(self.locations, "locations")
        weights = _as_float_array(self.weights, "weights")
        if self.kind == "discrete":
            if locations.size != weights.size:
                raise ValueError("locations and weights must have equal length")
            if not np.all(np.isfinite(locations)):
                raise ValueError("locations must be finite")
            if not np.all(np.isfinite(weights)) or np.any(weights < 0):
                raise ValueError("weights must be finite and nonnegative")
        locations.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def lebesgue(cls) -> "ThresholdMeasure":
        return cls("lebesgue")

    @classmethod
    def discrete(cls, locations, weights) -> "ThresholdMeasure":
        return cls("discrete", np.asarray(locations, float), np.asarray(weights, float))


def mixture(
    components: Sequence[StepDistribution], weights=None
) -> StepDistribution:
    """Convex combination of step CDFs as a single step distribution.

    Parameters
    ----------
    components : sequence of StepDistribution
        At least one component.
    weights : array-like, optional
        Nonnegative weights summing to one (within 1e-9).  Defaults to equal
        weights.

    Returns
    -------
    StepDistribution
        The pointwise weighted average of the component CDFs, expressed on
        the union of the component jump points.

    Notes
    -----
    Zero-weight components are dropped.  A mixture of identical components
    is returned unchanged, so averaging B copies of one distribution is
    exact.
    """
    components = list(components)
    if not components:
        raise ValueError("mixture needs at least one component")
    if weights is None:
        w = np.full(len(components), 1.0 / len(components))
    else:
        w = _as_float_array(weights, "weights")
    if w.size != len(components):
        raise ValueError("weights and components must have equal length")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if abs(float(np.sum(w)) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1 within 1e-9")

    active = [(d, wi) for d, wi in zip(components, w) if wi > 0.0]
    if not active:
        raise ValueError("all mixture weights are zero")
    first = active[0][0]
    if len(active) == 1 or all(d == first for d, _ in active[1:]):
        return first

    union = first.points
    for d, _ in active[1:]:
        union = np.union1d(union, d.points)
    acc = np.zeros(union.size)
    for d, wi in active:
        acc += wi * d.cdf(union)
    return StepDistribution.from_cdf_values(union, acc)
