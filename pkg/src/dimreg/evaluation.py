"""Forecast evaluation: scores, calibration diagnostics, and baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import rankdata

from .stepdist import StepDistribution

__all__ = [
    "ReliabilityBin",
    "ReliabilityDiagram",
    "WilcoxonResult",
    "EvalReport",
    "build_report",
    "mean_crps",
    "crps_values",
    "reliability",
    "pit_values",
    "pit_histogram",
    "wilcoxon_signed_rank",
    "ecdf_forecaster",
    "point_mae",
    "DEFAULT_RELIABILITY_THRESHOLDS",
    "DEFAULT_BIN_EDGES",
]

DEFAULT_RELIABILITY_THRESHOLDS = (1.0, 5.0, 9.0, 13.0)
DEFAULT_BIN_EDGES = tuple(np.linspace(0.0, 1.0, 11))

#: Largest effective sample size for which the signed-rank p-value is exact.
WILCOXON_EXACT_LIMIT = 25

#: Bins with at most this many observations are flagged as unreliable.
SPARSE_BIN_LIMIT = 2


def _check_paired(forecasts, y):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError("observations must be a vector")
    forecasts = list(forecasts)
    if len(forecasts) != y.size:
        raise ValueError(
            f"got {len(forecasts)} forecasts for {y.size} observations"
        )
    return forecasts, y


def crps_values(forecasts, y) -> np.ndarray:
    """Per-observation CRPS of paired forecasts and observations."""
    forecasts, y = _check_paired(forecasts, y)
    return np.array([d.crps(yi) for d, yi in zip(forecasts, y)])


def mean_crps(forecasts, y) -> float:
    """Arithmetic mean CRPS over paired forecasts and observations."""
    values = crps_values(forecasts, y)
    if values.size == 0:
        raise ValueError("need at least one forecast")
    return float(values.mean())


def point_mae(point_forecasts, y) -> float:
    """Mean absolute error of point forecasts (their CRPS as point masses)."""
    p = np.asarray(point_forecasts, dtype=float)
    yv = np.asarray(y, dtype=float)
    if p.shape != yv.shape or p.ndim != 1:
        raise ValueError("point forecasts and observations must be equal-length vectors")
    if p.size == 0:
        raise ValueError("need at least one forecast")
    return float(np.mean(np.abs(p - yv)))


def ecdf_forecaster(y_train) -> StepDistribution:
    """Unconditional empirical CDF of the training responses."""
    return StepDistribution.from_sample(y_train)


@dataclass(frozen=True)
class ReliabilityBin:
    lo: float
    hi: float
    count: int
    mean_forecast: float  # nan when the bin is empty
    observed_freq: float  # nan when the bin is empty
    flagged: bool  # True when count <= 2


@dataclass(frozen=True)
class ReliabilityDiagram:
    threshold: float
    bins: tuple[ReliabilityBin, ...]

    @property
    def total_count(self) -> int:
        return sum(b.count for b in self.bins)


def reliability(
    forecasts,
    y,
    thresholds=DEFAULT_RELIABILITY_THRESHOLDS,
    bin_edges=DEFAULT_BIN_EDGES,
) -> list[ReliabilityDiagram]:
    """Reliability diagram data for exceedance probabilities.

    For each threshold ``t`` the forecast probabilities ``1 - F(t)`` are
    grouped into the bins ``[e0, e1], (e1, e2], ..., (e_{k-1}, e_k]``; each
    bin reports the mean forecast probability, the observed frequency of
    ``y > t`` and the observation count.  Bins with at most two observations
    are flagged.
    """
    forecasts, y = _check_paired(forecasts, y)
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ValueError("need at least one threshold")
    edges = np.asarray(bin_edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0):
        raise ValueError("bin edges must be strictly increasing with at least two entries")

    diagrams = []
    for t in thresholds:
        probs = np.array([1.0 - d.cdf(t) for d in forecasts])
        exceeded = y > t
        # first bin is closed on the left, the rest are left-open
        which = np.searchsorted(edges[1:-1], probs, side="left")
        bins = []
        for k in range(edges.size - 1):
            sel = which == k
            count = int(np.sum(sel))
            if count:
                mean_p = float(probs[sel].mean())
                freq = float(exceeded[sel].mean())
            else:
                mean_p = float("nan")
                freq = float("nan")
            bins.append(
                ReliabilityBin(
                    lo=float(edges[k]),
                    hi=float(edges[k + 1]),
                    count=count,
                    mean_forecast=mean_p,
                    observed_freq=freq,
                    flagged=count <= SPARSE_BIN_LIMIT,
                )
            )
        diagrams.append(ReliabilityDiagram(threshold=t, bins=tuple(bins)))
    return diagrams


def pit_values(forecasts, y, seed: int = 0) -> np.ndarray:
    """Randomized PIT values, one seeded uniform per observation in data order."""
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    out = np.empty(y.size)
    i = 0
    for d, yi in zip(forecasts, y):
        out[i] = d.pit(yi, rng.random())
        i += 1
    if i != y.size:
        raise ValueError(f"got {i} forecasts for {y.size} observations")
    return out


def pit_histogram(forecasts, y, n_bins: int = 20, seed: int = 0) -> np.ndarray:
    """Counts of randomized PIT values over equal-width bins of [0, 1]."""
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    pits = pit_values(forecasts, y, seed=seed)
    counts, _ = np.histogram(pits, bins=n_bins, range=(0.0, 1.0))
    return counts


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+, the rank sum of positive differences
    p_value: float
    n_effective: int  # pairs remaining after dropping zero differences
    method: str  # "exact", "normal", or "degenerate"

    @property
    def degenerate(self) -> bool:
        return self.method == "degenerate"


def _exact_signed_rank_p(doubled_ranks: np.ndarray, w_doubled: int, n: int) -> float:
    # Distribution of the doubled statistic under independent sign flips,
    # by subset-sum dynamic programming over the integer doubled ranks.
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled_ranks:
        r = int(r)
        counts[r:] += counts[: total + 1 - r].copy()
    denom = 2.0**n
    cdf = counts[: w_doubled + 1].sum() / denom
    sf = counts[w_doubled:].sum() / denom
    return min(1.0, 2.0 * min(cdf, sf))


def wilcoxon_signed_rank(a, b) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test for paired score sequences.

    Zero differences are dropped; ties among the absolute differences get
    average ranks.  The p-value is exact (by enumeration of the sign-flip
    distribution) for up to 25 effective pairs and uses the normal
    approximation with tie-corrected variance and continuity correction
    beyond that.  All differences zero gives a degenerate result with
    ``p = 1``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("score sequences must be equal-length nonempty vectors")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("scores must be finite")
    d = a - b
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, n_effective=0, method="degenerate")
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())

    if n <= WILCOXON_EXACT_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        w_doubled = int(round(2.0 * w_plus))
        p = _exact_signed_rank_p(doubled, w_doubled, n)
        return WilcoxonResult(statistic=w_plus, p_value=p, n_effective=n, method="exact")

    mu = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts)) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    if var <= 0.0:
        return WilcoxonResult(statistic=w_plus, p_value=1.0, n_effective=n, method="degenerate")
    delta = w_plus - mu
    correction = 0.5 * np.sign(delta)
    z = (delta - correction) / np.sqrt(var)
    p = min(1.0, 2.0 * float(1.0 - ndtr(abs(z))))
    return WilcoxonResult(statistic=w_plus, p_value=p, n_effective=n, method="normal")


@dataclass
class EvalReport:
    """Evaluation summary for one forecast system on one test set."""

    label: str
    crps: np.ndarray
    mean_crps: float
    pit: np.ndarray
    pit_counts: np.ndarray
    reliability: list[ReliabilityDiagram]
    baselines: dict[str, float]
    comparisons: dict[str, WilcoxonResult]

    def __post_init__(self):
        n = self.crps.size
        if self.pit.size != n or int(self.pit_counts.sum()) != n:
            raise ValueError("per-observation arrays must have equal length")
        for diagram in self.reliability:
            if diagram.total_count != n:
                raise ValueError("reliability bin counts must sum to the sample size")


def build_report(
    forecasts,
    y,
    label: str = "dim",
    thresholds=DEFAULT_RELIABILITY_THRESHOLDS,
    bin_edges=DEFAULT_BIN_EDGES,
    n_bins: int = 20,
    seed: int = 0,
    baselines: dict[str, float] | None = None,
    comparisons: dict[str, WilcoxonResult] | None = None,
) -> EvalReport:
    """Score one forecast list and collect the calibration diagnostics."""
    forecasts = list(forecasts)
    y = np.asarray(y, dtype=float)
    crps = crps_values(forecasts, y)
    pit = pit_values(forecasts, y, seed=seed)
    counts, _ = np.histogram(pit, bins=n_bins, range=(0.0, 1.0))
    return EvalReport(
        label=label,
        crps=crps,
        mean_crps=float(crps.mean()),
        pit=pit,
        pit_counts=counts,
        reliability=reliability(forecasts, y, thresholds=thresholds, bin_edges=bin_edges),
        baselines=dict(baselines or {}),
        comparisons=dict(comparisons or {}),
    )
