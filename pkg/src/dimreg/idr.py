"""Isotonic distributional regression on a totally ordered index.

Given training pairs ``(theta_j, y_j)`` the fit estimates, for every
threshold ``t`` among the unique responses, the vector minimizing the sum of
``(eta_j - 1{y_j <= t})**2`` subject to ``eta`` being antitonic in the index
(a larger index means a stochastically larger response, hence a pointwise
smaller CDF).  Each threshold column is solved by weighted
pool-adjacent-violators after pre-pooling observations with equal index
values.

Numerical contract: block sums stay integer-valued throughout pooling and
violation checks are done by cross-multiplication, so every fitted value is
a single correctly rounded division of two exactly represented integers.
The classical min-max window formula (:func:`minmax_cdf`), computed the same
way, therefore agrees with the solver bit for bit and serves as an
independent correctness oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stepdist import StepDistribution

__all__ = [
    "IdrFit",
    "fit",
    "fit_cdf_columns",
    "minmax_cdf",
    "predict",
    "insample_crps",
]


def _pava_columns_impl(ys_sorted, bounds, weights, thresholds, out):
    # For each threshold, fit the antitonic weighted least squares column.
    # Blocks are the tie groups of the index; counts[b] tracks how many
    # responses in block b are <= the current threshold (integer-valued).
    k = bounds.shape[0] - 1
    m = thresholds.shape[0]
    counts = np.zeros(k)
    ptrs = bounds[:k].copy()
    bw = np.empty(k)
    bs = np.empty(k)
    last = np.empty(k, dtype=np.int64)
    for col in range(m):
        t = thresholds[col]
        for b in range(k):
            p = ptrs[b]
            end = bounds[b + 1]
            c = counts[b]
            while p < end and ys_sorted[p] <= t:
                p += 1
                c += 1.0
            ptrs[b] = p
            counts[b] = c
        # pool adjacent violators, fitting a nonincreasing sequence of
        # block means counts/weights; a violation is mean[top] > mean[prev],
        # tested exactly via cross-multiplication of integer-valued sums
        top = -1
        for b in range(k):
            top += 1
            bw[top] = weights[b]
            bs[top] = counts[b]
            last[top] = b
            while top > 0 and bs[top] * bw[top - 1] > bs[top - 1] * bw[top]:
                bw[top - 1] += bw[top]
                bs[top - 1] += bs[top]
                last[top - 1] = last[top]
                top -= 1
        pos = 0
        for blk in range(top + 1):
            v = bs[blk] / bw[blk]
            end = last[blk] + 1
            for j in range(pos, end):
                out[j, col] = v
            pos = end


try:  # pragma: no cover - exercised indirectly
    from numba import njit

    _pava_columns = njit(cache=True)(_pava_columns_impl)
except ImportError:  # pragma: no cover
    _pava_columns = _pava_columns_impl


@dataclass(frozen=True)
class IdrFit:
    """Fitted conditional CDFs on the grid of training indices and thresholds.

    Attributes
    ----------
    indices : ndarray, shape (k,)
        Strictly increasing unique training index values.
    thresholds : ndarray, shape (m,)
        Strictly increasing unique training responses.
    cdf : ndarray, shape (k, m)
        ``cdf[i, j]`` is the fitted CDF at ``thresholds[j]`` for index
        ``indices[i]``.  Rows are nondecreasing with final entry one;
        columns are nonincreasing (antitonic in the index); all entries lie
        in [0, 1].
    """

    indices: np.ndarray
    thresholds: np.ndarray
    cdf: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=float)
        thresholds = np.asarray(self.thresholds, dtype=float)
        cdf = np.asarray(self.cdf, dtype=float)
        if indices.ndim != 1 or thresholds.ndim != 1 or cdf.ndim != 2:
            raise ValueError("indices and thresholds must be vectors, cdf a matrix")
        if cdf.shape != (indices.size, thresholds.size):
            raise ValueError("cdf shape must be (len(indices), len(thresholds))")
        if indices.size == 0:
            raise ValueError("fit must contain at least one index value")
        if indices.size > 1 and not np.all(np.diff(indices) > 0):
            raise ValueError("indices must be strictly increasing")
        if thresholds.size > 1 and not np.all(np.diff(thresholds) > 0):
            raise ValueError("thresholds must be strictly increasing")
        if np.any(cdf < 0.0) or np.any(cdf > 1.0):
            raise ValueError("cdf entries must lie in [0, 1]")
        if not np.all(cdf[:, -1] == 1.0):
            raise ValueError("final cdf column must be exactly 1")
        if thresholds.size > 1 and np.any(np.diff(cdf, axis=1) < 0.0):
            raise ValueError("cdf rows must be nondecreasing in the threshold")
        if indices.size > 1 and np.any(np.diff(cdf, axis=0) > 0.0):
            raise ValueError("cdf columns must be nonincreasing in the index")
        for arr in (indices, thresholds, cdf):
            arr.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "thresholds", thresholds)
        object.__setattr__(self, "cdf", cdf)

    @property
    def n_indices(self) -> int:
        return int(self.indices.size)

    @property
    def n_thresholds(self) -> int:
        return int(self.thresholds.size)

    def distribution_at(self, position: int) -> StepDistribution:
        """Fitted CDF row at a training index position, as a distribution."""
        return StepDistribution.from_cdf_values(self.thresholds, self.cdf[position].copy())


def _prepare_training(index_values, responses):
    theta = np.asarray(index_values, dtype=float)
    y = np.asarray(responses, dtype=float)
    if theta.ndim != 1 or y.ndim != 1:
        raise ValueError("index values and responses must be one-dimensional")
    if theta.size == 0:
        raise ValueError("training data must not be empty")
    if theta.size != y.size:
        raise ValueError("index values and responses must have equal length")
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    order = np.lexsort((y, theta))
    return theta[order], y[order]


def fit(index_values, responses) -> IdrFit:
    """Fit isotonic distributional regression to ``(index, response)`` pairs.

    Observations sharing an index value are pre-pooled into one weighted
    observation, so equal indices receive equal fitted distributions.

    Parameters
    ----------
    index_values, responses : array-like, shape (n,)
        Finite training pairs, ``n >= 1``.

    Returns
    -------
    IdrFit
    """
    theta_s, y_s = _prepare_training(index_values, responses)
    indices, starts = np.unique(theta_s, return_index=True)
    bounds = np.append(starts, theta_s.size).astype(np.int64)
    weights = np.diff(bounds).astype(float)
    thresholds = np.unique(y_s)
    cdf = np.empty((indices.size, thresholds.size))
    _pava_columns(y_s, bounds, weights, thresholds, cdf)
    return IdrFit(indices, thresholds, cdf)


def fit_cdf_columns(index_values, responses, thresholds) -> tuple[np.ndarray, np.ndarray]:
    """Fitted CDF columns at caller-chosen thresholds only.

    Solves the same antitonic least squares problem as :func:`fit` but only
    for the given thresholds, which keeps memory at ``O(k * len(thresholds))``
    for large training sets.  Each returned column equals the corresponding
    column of the full fit at the largest training response not exceeding
    the threshold.

    Returns
    -------
    (indices, columns)
        Unique training indices and the matrix of fitted CDF values, shape
        ``(len(indices), len(thresholds))``.
    """
    theta_s, y_s = _prepare_training(index_values, responses)
    t = np.asarray(thresholds, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("thresholds must be a nonempty vector")
    if not np.all(np.isfinite(t)):
        raise ValueError("thresholds must be finite")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ValueError("thresholds must be strictly increasing")
    indices, starts = np.unique(theta_s, return_index=True)
    bounds = np.append(starts, theta_s.size).astype(np.int64)
    weights = np.diff(bounds).astype(float)
    columns = np.empty((indices.size, t.size))
    _pava_columns(y_s, bounds, weights, t, columns)
    return indices, columns


def minmax_cdf(index_values, responses, j: int, t: float) -> float:
    """Fitted CDF value at position ``j`` and threshold ``t`` via the min-max formula.

    For strictly increasing index values the antitonic least squares fit of
    the indicators ``1{y_i <= t}`` admits the closed form

        min over r <= j of  max over s >= j of  mean(z[r..s]),

    which this function evaluates directly.  Window means are single
    divisions of integer counts, matching :func:`fit` exactly.  Intended as
    an independent oracle; index ties are rejected.
    """
    theta = np.asarray(index_values, dtype=float)
    y = np.asarray(responses, dtype=float)
    if theta.ndim != 1 or y.ndim != 1 or theta.size != y.size or theta.size == 0:
        raise ValueError("index values and responses must be equal-length nonempty vectors")
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    if theta.size > 1 and not np.all(np.diff(theta) > 0):
        raise ValueError("index values must be strictly increasing (no ties)")
    n = theta.size
    if not 0 <= j < n:
        raise ValueError("position out of range")
    prefix = np.zeros(n + 1)
    np.cumsum(y <= float(t), out=prefix[1:])
    best = np.inf
    for r in range(j + 1):
        worst = -np.inf
        for s in range(j, n):
            mean = (prefix[s + 1] - prefix[r]) / (s + 1 - r)
            if mean > worst:
                worst = mean
        if worst < best:
            best = worst
    return float(best)


def _interpolated_row(fit_: IdrFit, u: float) -> np.ndarray:
    indices = fit_.indices
    pos = int(np.searchsorted(indices, u))
    if pos < indices.size and indices[pos] == u:
        return fit_.cdf[pos].copy()
    if pos == 0:
        return fit_.cdf[0].copy()
    if pos == indices.size:
        return fit_.cdf[-1].copy()
    lam = (indices[pos] - u) / (indices[pos] - indices[pos - 1])
    hi_row = fit_.cdf[pos - 1]  # smaller index, pointwise larger CDF
    lo_row = fit_.cdf[pos]
    row = lo_row + lam * (hi_row - lo_row)
    # rounding guard: the convex combination lies between the two rows, and
    # clamping onto them preserves exact antitonicity across query points
    np.minimum(row, hi_row, out=row)
    np.maximum(row, lo_row, out=row)
    return row


def predict(fit_: IdrFit, u: float) -> StepDistribution:
    """Predictive distribution at index value ``u``.

    Equals the fitted row when ``u`` is a training index, the linear-in-index
    pointwise interpolation of the two neighbouring rows when ``u`` lies
    between training indices, and the first (last) row below (above) the
    training range.
    """
    u = float(u)
    if not np.isfinite(u):
        raise ValueError("index value must be finite")
    row = _interpolated_row(fit_, u)
    return StepDistribution.from_cdf_values(fit_.thresholds, row)


def _crps_sum(fit_: IdrFit, index_values, responses) -> float:
    theta = np.asarray(index_values, dtype=float)
    y = np.asarray(responses, dtype=float)
    if theta.ndim != 1 or y.ndim != 1 or theta.size != y.size:
        raise ValueError("index values and responses must be equal-length vectors")
    pos = np.searchsorted(fit_.indices, theta)
    if np.any(pos >= fit_.indices.size) or np.any(fit_.indices[np.minimum(pos, fit_.indices.size - 1)] != theta):
        raise ValueError("all index values must be training indices of the fit")
    total = 0.0
    # score one fitted row at a time so repeated indices reuse the distribution
    order = np.argsort(pos, kind="stable")
    i = 0
    while i < order.size:
        p = pos[order[i]]
        dist = fit_.distribution_at(int(p))
        while i < order.size and pos[order[i]] == p:
            total += dist.crps(y[order[i]])
            i += 1
    return total


def insample_crps(fit_: IdrFit, index_values, responses) -> float:
    """Mean CRPS of the fitted distributions against their own responses."""
    y = np.asarray(responses, dtype=float)
    if y.size == 0:
        raise ValueError("training data must not be empty")
    return _crps_sum(fit_, index_values, responses) / y.size
