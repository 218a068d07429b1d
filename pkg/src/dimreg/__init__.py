"""Distributional regression through a pseudo-index and isotonic CDF estimation.

The estimator works in two stages: a parametric index model orders the
covariate space, and the conditional distributions are then estimated
nonparametrically under the constraint that a larger index means a
stochastically larger response.  Predictions are right-continuous step
CDFs, scored exactly with the continuous ranked probability score, and the
whole pipeline can be bagged over repeated random splits of the training
data.
"""

from .stepdist import StepDistribution, ThresholdMeasure, mixture
from .idr import IdrFit, fit, fit_cdf_columns, insample_crps, minmax_cdf, predict
from .index import (
    IndexModel,
    RankDeficiencyError,
    UndefinedCorrelationError,
    binned_ecdfs,
    fit_ols_index,
    index_values,
    spearman,
)
from .dim import (
    DimConfig,
    DimMember,
    DimModel,
    fit_dim,
    member_rng,
    model_from_dict,
    model_to_dict,
    predict_dim,
    simultaneous_loss,
)
from .evaluation import (
    EvalReport,
    ReliabilityBin,
    ReliabilityDiagram,
    WilcoxonResult,
    ecdf_forecaster,
    mean_crps,
    pit_histogram,
    pit_values,
    point_mae,
    reliability,
    wilcoxon_signed_rank,
)
from .sim import RateExperimentResult, SupError, SyntheticDgp, generate, rate_experiment, sup_error
from .cli import destandardize_survival, ingest, standardize_los

__version__ = "0.1.0"

__all__ = [
    "StepDistribution",
    "ThresholdMeasure",
    "mixture",
    "IdrFit",
    "fit",
    "fit_cdf_columns",
    "insample_crps",
    "minmax_cdf",
    "predict",
    "IndexModel",
    "RankDeficiencyError",
    "UndefinedCorrelationError",
    "binned_ecdfs",
    "fit_ols_index",
    "index_values",
    "spearman",
    "DimConfig",
    "DimMember",
    "DimModel",
    "fit_dim",
    "member_rng",
    "model_from_dict",
    "model_to_dict",
    "predict_dim",
    "simultaneous_loss",
    "EvalReport",
    "ReliabilityBin",
    "ReliabilityDiagram",
    "WilcoxonResult",
    "ecdf_forecaster",
    "mean_crps",
    "pit_histogram",
    "pit_values",
    "point_mae",
    "reliability",
    "wilcoxon_signed_rank",
    "RateExperimentResult",
    "SupError",
    "SyntheticDgp",
    "generate",
    "rate_experiment",
    "sup_error",
    "destandardize_survival",
    "ingest",
    "standardize_los",
    "__version__",
]
