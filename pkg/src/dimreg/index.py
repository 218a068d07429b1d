"""Pseudo-index estimation and monotonicity diagnostics.

The distributional model only uses the index through its ordering, so any
estimator whose predictions are an increasing transformation of the true
index works.  Built in here is ordinary least squares of a transformed
response (identity or ``log(y + 1)``) on a caller-expanded design matrix;
richer index models are supported by supplying their predictions as an
external index column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .stepdist import StepDistribution

__all__ = [
    "IndexModel",
    "RankDeficiencyError",
    "UndefinedCorrelationError",
    "RESPONSE_TRANSFORMS",
    "transform_response",
    "inverse_transform",
    "fit_ols_index",
    "index_values",
    "spearman",
    "binned_ecdfs",
]

RESPONSE_TRANSFORMS = ("identity", "log1p")

#: Relative singular value threshold below which a design is rank deficient.
RANK_RTOL = 1e-10


class RankDeficiencyError(ValueError):
    """The design matrix is numerically rank deficient."""


class UndefinedCorrelationError(ValueError):
    """Rank correlation is undefined because one sequence is constant."""


@dataclass(frozen=True)
class IndexModel:
    """Linear pseudo-index: coefficients on the design columns plus the
    response transformation tag used when fitting."""

    coefficients: np.ndarray
    response_transform: str = "identity"
    columns: tuple[str, ...] | None = None

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=float)
        if coef.ndim != 1 or coef.size == 0:
            raise ValueError("coefficients must be a nonempty vector")
        if not np.all(np.isfinite(coef)):
            raise ValueError("coefficients must be finite")
        if self.response_transform not in RESPONSE_TRANSFORMS:
            raise ValueError(f"unknown response transform: {self.response_transform!r}")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        if self.columns is not None:
            object.__setattr__(self, "columns", tuple(self.columns))


def transform_response(transform: str, y) -> np.ndarray:
    """Apply the response transformation; ``log1p`` requires ``y >= 0``."""
    y = np.asarray(y, dtype=float)
    if transform == "identity":
        return y
    if transform == "log1p":
        if np.any(y < 0):
            raise ValueError("log1p transform requires nonnegative responses")
        return np.log1p(y)
    raise ValueError(f"unknown response transform: {transform!r}")


def inverse_transform(transform: str, values) -> np.ndarray:
    """Map transformed-scale values back to the response scale."""
    values = np.asarray(values, dtype=float)
    if transform == "identity":
        return values
    if transform == "log1p":
        return np.expm1(values)
    raise ValueError(f"unknown response transform: {transform!r}")


def _check_design(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("design matrix must be two-dimensional")
    if not np.all(np.isfinite(X)):
        raise ValueError("design matrix entries must be finite")
    return X


def fit_ols_index(X, y, transform: str = "identity", columns=None) -> IndexModel:
    """Least squares fit of the transformed response on the design matrix.

    Parameters
    ----------
    X : array-like, shape (n, p)
        Covariate basis, already expanded (including any intercept column).
    y : array-like, shape (n,)
        Responses; must be nonnegative when ``transform='log1p'``.
    transform : {'identity', 'log1p'}
    columns : sequence of str, optional
        Names recorded on the fitted model.

    Raises
    ------
    RankDeficiencyError
        If the smallest singular value of ``X`` is below ``1e-10`` times the
        largest.
    """
    X = _check_design(X)
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != X.shape[0]:
        raise ValueError("responses must be a vector matching the design rows")
    if not np.all(np.isfinite(y)):
        raise ValueError("responses must be finite")
    n, p = X.shape
    if p == 0:
        raise ValueError("design matrix needs at least one column")
    if n < p:
        raise ValueError(f"need at least {p} rows to fit {p} coefficients, got {n}")
    ty = transform_response(transform, y)
    coef, _, _, sv = np.linalg.lstsq(X, ty, rcond=None)
    if sv[0] <= 0.0 or sv[-1] < RANK_RTOL * sv[0]:
        raise RankDeficiencyError(
            f"design matrix is rank deficient (singular values {sv[-1]:.3e} vs {sv[0]:.3e})"
        )
    return IndexModel(coef, transform, tuple(columns) if columns is not None else None)


def index_values(model: IndexModel, X) -> np.ndarray:
    """Evaluate the linear pseudo-index on the rows of ``X``."""
    X = _check_design(X)
    if X.shape[1] != model.coefficients.size:
        raise ValueError(
            f"design has {X.shape[1]} columns, model expects {model.coefficients.size}"
        )
    return X @ model.coefficients


def spearman(index, y) -> float:
    """Spearman rank correlation with average ranks for ties.

    Raises
    ------
    UndefinedCorrelationError
        If either sequence is constant.
    """
    a = np.asarray(index, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ValueError("sequences must be equal-length vectors")
    if a.size < 2:
        raise ValueError("need at least two observations")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("values must be finite")
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise UndefinedCorrelationError("rank correlation of a constant sequence is undefined")
    ra = rankdata(a)
    rb = rankdata(b)
    ra = ra - ra.mean()
    rb = rb - rb.mean()
    return float(np.dot(ra, rb) / np.sqrt(np.dot(ra, ra) * np.dot(rb, rb)))


def binned_ecdfs(index, y, bins) -> list[tuple[tuple[float, float], StepDistribution]]:
    """Empirical CDFs of the responses stratified by index bins.

    Parameters
    ----------
    index, y : array-like, shape (n,)
    bins : sequence of (lo, hi)
        Disjoint intervals; membership is ``lo <= index < hi``.

    Returns
    -------
    list of ((lo, hi), StepDistribution)
        One entry per nonempty bin, in the given order.
    """
    a = np.asarray(index, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ValueError("index and responses must be equal-length vectors")
    intervals = [(float(lo), float(hi)) for lo, hi in bins]
    for lo, hi in intervals:
        if not lo < hi:
            raise ValueError(f"empty or inverted bin ({lo}, {hi})")
    for (lo1, hi1), (lo2, hi2) in zip(
        sorted(intervals), sorted(intervals)[1:]
    ):
        if hi1 > lo2:
            raise ValueError("bins must be disjoint")
    out = []
    for lo, hi in intervals:
        sel = (a >= lo) & (a < hi)
        if np.any(sel):
            out.append(((lo, hi), StepDistribution.from_sample(b[sel])))
    return out
