"""Two-stage estimation of conditional distributions with split bagging.

Each ensemble member draws a random partition of the training rows: the
pseudo-index is fitted on the second part, index values are computed on the
first part, and isotonic distributional regression is fitted on those
``(index, response)`` pairs.  Predictions average the member CDFs with equal
weights.

Reproducibility: member ``b`` of a model with seed ``s`` uses the generator
``numpy.random.default_rng(numpy.random.SeedSequence(s, spawn_key=(b,)))``
(see :func:`member_rng`).  The member streams are independent, so members
can be fitted in parallel without changing results; the member order is
fixed by member number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import idr
from .idr import IdrFit
from .index import (
    IndexModel,
    RankDeficiencyError,
    RESPONSE_TRANSFORMS,
    fit_ols_index,
    index_values,
)
from .stepdist import StepDistribution, mixture

__all__ = [
    "DimConfig",
    "DimMember",
    "DimModel",
    "member_rng",
    "fit_dim",
    "predict_dim",
    "simultaneous_loss",
    "model_to_dict",
    "model_from_dict",
]

INDEX_SOURCES = ("builtin_ols", "external_column")

#: Retries with a fresh partition after a rank-deficient index fit.
MAX_SPLIT_RETRIES = 10


@dataclass(frozen=True)
class DimConfig:
    """Estimation settings.

    ``xi`` is the fraction of rows (rounded up) assigned to the
    distribution-estimation part of each split; ``n_splits`` is the number
    of bagged members.  ``no_split`` fits both stages on all rows, which
    trades the theoretical guarantees for in-sample smoothness; members are
    then identical.
    """

    xi: float = 0.5
    n_splits: int = 100
    seed: int = 0
    transform: str = "identity"
    index_source: str = "builtin_ols"
    no_split: bool = False

    def __post_init__(self):
        if not 0.0 < self.xi < 1.0:
            raise ValueError("xi must lie strictly between 0 and 1")
        if self.n_splits < 1:
            raise ValueError("n_splits must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.transform not in RESPONSE_TRANSFORMS:
            raise ValueError(f"unknown response transform: {self.transform!r}")
        if self.index_source not in INDEX_SOURCES:
            raise ValueError(f"unknown index source: {self.index_source!r}")


@dataclass(frozen=True)
class DimMember:
    """One bagged member: its index model (None for an external index) and
    the isotonic distributional regression fitted on its first split part."""

    index_model: IndexModel | None
    idr_fit: IdrFit


@dataclass(frozen=True)
class DimModel:
    config: DimConfig
    members: tuple[DimMember, ...]
    n_train: int
    columns: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.members) != self.config.n_splits:
            raise ValueError("number of members must equal n_splits")
        object.__setattr__(self, "members", tuple(self.members))
        if self.columns is not None:
            object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def n_members(self) -> int:
        return len(self.members)


def member_rng(seed: int, member: int) -> np.random.Generator:
    """Portable per-member generator: PCG64 on ``SeedSequence(seed, spawn_key=(member,))``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(member),)))


def split_size(n: int, xi: float) -> int:
    """Number of rows in the distribution-estimation part: ``ceil(n * xi)``."""
    return int(math.ceil(n * xi))


def _fit_member(X, y, external, config, b):
    n = y.size
    if config.no_split:
        if config.index_source == "builtin_ols":
            model = fit_ols_index(X, y, config.transform)
            theta = index_values(model, X)
        else:
            model = None
            theta = external
        return DimMember(model, idr.fit(theta, y))

    n1 = split_size(n, config.xi)
    rng = member_rng(config.seed, b)
    attempts = 1 + MAX_SPLIT_RETRIES
    last_error = None
    for _ in range(attempts):
        perm = rng.permutation(n)
        part1 = perm[:n1]
        part2 = perm[n1:]
        if config.index_source == "builtin_ols":
            try:
                model = fit_ols_index(X[part2], y[part2], config.transform)
            except RankDeficiencyError as err:
                last_error = err
                continue
            theta = index_values(model, X[part1])
        else:
            model = None
            theta = external[part1]
        return DimMember(model, idr.fit(theta, y[part1]))
    raise RankDeficiencyError(
        f"index fit failed in member {b} after {MAX_SPLIT_RETRIES} retries: {last_error}"
    )


def fit_dim(X, y, config: DimConfig, external_index=None, columns=None) -> DimModel:
    """Fit the bagged two-stage model.

    Parameters
    ----------
    X : array-like, shape (n, p) or None
        Expanded covariate design; required for ``index_source='builtin_ols'``.
    y : array-like, shape (n,)
        Responses.
    config : DimConfig
    external_index : array-like, shape (n,), optional
        Precomputed index values; required for
        ``index_source='external_column'``.
    columns : sequence of str, optional
        Design column names recorded on the model.

    Notes
    -----
    Identical data, configuration and seed give an identical model.  A
    rank-deficient index fit within a split is retried with a fresh
    partition up to 10 times before raising.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("responses must be a nonempty vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("responses must be finite")
    n = y.size

    external = None
    if config.index_source == "builtin_ols":
        if X is None:
            raise ValueError("builtin_ols needs a design matrix")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] != n:
            raise ValueError("design matrix must have one row per response")
        p = X.shape[1]
        if n < max(2, p + 1):
            raise ValueError(f"need at least {max(2, p + 1)} rows, got {n}")
        if not config.no_split and n - split_size(n, config.xi) < p:
            raise ValueError(
                "index-estimation part has fewer rows than design columns; "
                "decrease xi or provide more data"
            )
    else:
        if external_index is None:
            raise ValueError("external_column needs index values")
        external = np.asarray(external_index, dtype=float)
        if external.ndim != 1 or external.size != n:
            raise ValueError("external index must have one value per response")
        if not np.all(np.isfinite(external)):
            raise ValueError("external index values must be finite")
        if n < 2 and not config.no_split:
            raise ValueError("need at least 2 rows to split")

    if config.no_split:
        first = _fit_member(X, y, external, config, 0)
        members = (first,) * config.n_splits
    else:
        members = tuple(
            _fit_member(X, y, external, config, b) for b in range(config.n_splits)
        )
    cols = tuple(columns) if columns is not None else None
    return DimModel(config=config, members=members, n_train=n, columns=cols)


def _member_index_values(model: DimModel, member: DimMember, X_new, external) -> np.ndarray:
    if member.index_model is not None:
        return index_values(member.index_model, X_new)
    return external


def predict_dim(model: DimModel, X_new=None, external_index=None) -> list[StepDistribution]:
    """Predictive distributions for new rows: the equal-weight mixture of the
    member predictions.

    For built-in index models pass ``X_new`` with the training columns; for
    external-index models pass ``external_index`` values instead.
    """
    uses_builtin = any(mb.index_model is not None for mb in model.members)
    if uses_builtin:
        if X_new is None:
            raise ValueError("this model predicts from covariates; pass X_new")
        X_new = np.asarray(X_new, dtype=float)
        if X_new.ndim != 2:
            raise ValueError("X_new must be two-dimensional")
        p = model.members[0].index_model.coefficients.size
        if X_new.shape[1] != p:
            raise ValueError(f"X_new has {X_new.shape[1]} columns, model expects {p}")
        n_new = X_new.shape[0]
        external = None
    else:
        if external_index is None:
            raise ValueError("this model predicts from an external index column")
        external = np.asarray(external_index, dtype=float)
        if external.ndim != 1:
            raise ValueError("external index must be a vector")
        if not np.all(np.isfinite(external)):
            raise ValueError("external index values must be finite")
        n_new = external.size

    member_vals = [
        _member_index_values(model, mb, X_new, external) for mb in model.members
    ]
    out = []
    for i in range(n_new):
        dists = [
            idr.predict(mb.idr_fit, vals[i])
            for mb, vals in zip(model.members, member_vals)
        ]
        out.append(mixture(dists))
    return out


def simultaneous_loss(index_vals, y) -> float:
    """Total CRPS of the isotonic distributional fit for a fixed index.

    Fits the distribution stage on ``(index, response)`` pairs and returns
    the summed CRPS of the fitted distributions at their own responses,
    which is the inner minimum of the joint index/distribution loss at this
    index.  No outer minimization over index functions is attempted.
    """
    f = idr.fit(index_vals, y)
    return idr._crps_sum(f, index_vals, y)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

SCHEMA_VERSION = 1


def model_to_dict(model: DimModel, metadata: dict | None = None) -> dict:
    """JSON-ready dictionary with the full model state.

    The inverse of :func:`model_from_dict`; round-tripping is exact because
    floats are serialized with shortest round-trip representation.
    """
    members = []
    for mb in model.members:
        if mb.index_model is None:
            index_part = None
        else:
            index_part = {
                "coefficients": mb.index_model.coefficients.tolist(),
                "transform": mb.index_model.response_transform,
                "columns": list(mb.index_model.columns) if mb.index_model.columns else None,
            }
        members.append(
            {
                "index_model": index_part,
                "idr": {
                    "indices": mb.idr_fit.indices.tolist(),
                    "thresholds": mb.idr_fit.thresholds.tolist(),
                    "cdf": mb.idr_fit.cdf.tolist(),
                },
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "xi": model.config.xi,
            "n_splits": model.config.n_splits,
            "seed": model.config.seed,
            "transform": model.config.transform,
            "index_source": model.config.index_source,
            "no_split": model.config.no_split,
        },
        "members": members,
        "metadata": {
            "n_train": model.n_train,
            "columns": list(model.columns) if model.columns is not None else None,
            **(metadata or {}),
        },
    }


def model_from_dict(payload: dict) -> tuple[DimModel, dict]:
    """Rebuild a model (and its extra metadata) from :func:`model_to_dict` output."""
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema version: {version!r}")
    cfg = payload["config"]
    config = DimConfig(
        xi=float(cfg["xi"]),
        n_splits=int(cfg["n_splits"]),
        seed=int(cfg["seed"]),
        transform=str(cfg["transform"]),
        index_source=str(cfg["index_source"]),
        no_split=bool(cfg["no_split"]),
    )
    members = []
    for mb in payload["members"]:
        ip = mb["index_model"]
        if ip is None:
            index_model = None
        else:
            index_model = IndexModel(
                np.asarray(ip["coefficients"], dtype=float),
                ip["transform"],
                tuple(ip["columns"]) if ip.get("columns") else None,
            )
        fitted = IdrFit(
            np.asarray(mb["idr"]["indices"], dtype=float),
            np.asarray(mb["idr"]["thresholds"], dtype=float),
            np.asarray(mb["idr"]["cdf"], dtype=float),
        )
        members.append(DimMember(index_model, fitted))
    meta = dict(payload.get("metadata") or {})
    n_train = int(meta.pop("n_train"))
    columns = meta.pop("columns", None)
    model = DimModel(
        config=config,
        members=tuple(members),
        n_train=n_train,
        columns=tuple(columns) if columns else None,
    )
    return model, meta
