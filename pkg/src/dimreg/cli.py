"""Command-line surface: CSV ingestion, model persistence, and subcommands.

Subcommands: ``fit``, ``predict``, ``evaluate``, ``simulate``, ``diagnose``.
Data interchange is CSV with a header row, UTF-8, ``.`` decimal separator.
Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.

Also home to the length-of-stay time utilities: responses can be measured
from the first midnight after admission (``y - 1 + h/24`` for admission
hour ``h``), and survival statements on the raw scale are recovered from
the standardized predictive distribution by a ratio of survival
probabilities.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import dim, evaluation, sim
from .index import (
    RankDeficiencyError,
    UndefinedCorrelationError,
    binned_ecdfs,
    fit_ols_index,
    index_values,
    inverse_transform,
    spearman,
)
from .stepdist import StepDistribution

__all__ = [
    "DataError",
    "UsageError",
    "DegenerateConditioningError",
    "Dataset",
    "ingest",
    "standardize_los",
    "destandardize_survival",
    "main",
    "entry_point",
]

PREDICT_CHUNK = 512

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class DataError(ValueError):
    """Malformed or inconsistent input data."""


class UsageError(ValueError):
    """Invalid flag combination."""


class DegenerateConditioningError(ValueError):
    """Conditioning event has probability zero."""


# ----------------------------------------------------------------------
# length-of-stay time standardization
# ----------------------------------------------------------------------


def standardize_los(y_raw, hour):
    """Length of stay measured from the first midnight after admission.

    ``y_raw`` is the time between admission and discharge in days and
    ``hour`` the admission hour (0 to 23); the standardized value is
    ``y - 1 + h/24``.  Nonpositive results mark stays that end before the
    first midnight and are excluded downstream.
    """
    y = np.asarray(y_raw, dtype=float)
    h = np.asarray(hour, dtype=float)
    if np.any(y < 0):
        raise ValueError("raw length of stay must be nonnegative")
    if np.any(h < 0) or np.any(h > 23):
        raise ValueError("admission hour must lie in [0, 23]")
    out = y - 1.0 + h / 24.0
    return float(out) if out.ndim == 0 else out


def destandardize_survival(f_tilde: StepDistribution, hour: float, t: float) -> float:
    """P(raw LoS > 1 + t | raw LoS > 1) from a standardized-scale distribution.

    Equals the ratio of the standardized survival at ``t + h/24`` to the
    standardized survival at ``h/24``; the distribution must be conditioned
    on a positive standardized stay.
    """
    h = float(hour)
    if not 0 <= h <= 23:
        raise ValueError("admission hour must lie in [0, 23]")
    den = 1.0 - f_tilde.cdf(h / 24.0)
    if den <= 0.0:
        raise DegenerateConditioningError(
            "standardized distribution has no mass beyond the admission-hour offset"
        )
    num = 1.0 - f_tilde.cdf(float(t) + h / 24.0)
    return num / den


# ----------------------------------------------------------------------
# CSV ingestion
# ----------------------------------------------------------------------


@dataclass
class Dataset:
    """Typed view of one CSV file.

    ``X``/``covariate_names`` hold the expanded numeric design (categorical
    columns one-hot encoded as ``col=level`` with the lexicographically
    first level as dropped reference); ``encoding`` records per-column
    typing so a training encoding can be replayed on test data.
    """

    n: int
    covariate_names: list[str]
    X: np.ndarray | None
    y: np.ndarray | None
    index: np.ndarray | None
    hour: np.ndarray | None
    encoding: list[tuple[str, list[str] | None]]


def _read_table(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file") from None
            header = [c.strip() for c in header]
            if any(not c for c in header):
                raise DataError(f"{path}: blank column name in header")
            if len(set(header)) != len(header):
                raise DataError(f"{path}: duplicate column names in header")
            rows = []
            for lineno, row in enumerate(reader, start=1):
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataError(
                        f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                    )
                rows.append([c.strip() for c in row])
    except OSError as err:
        raise DataError(f"cannot read {path}: {err}") from err
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, rows


def _column(header: list[str], rows: list[list[str]], name: str, path: str) -> list[str]:
    try:
        pos = header.index(name)
    except ValueError:
        raise DataError(f"{path}: missing column {name!r}") from None
    return [row[pos] for row in rows]


def _numeric_column(cells: list[str], name: str, path: str) -> np.ndarray:
    missing = [i + 1 for i, c in enumerate(cells) if c == ""]
    if missing:
        shown = ", ".join(map(str, missing[:10]))
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise DataError(f"{path}: column {name!r} missing on row(s) {shown}{more}")
    out = np.empty(len(cells))
    for i, c in enumerate(cells):
        try:
            out[i] = float(c)
        except ValueError:
            raise DataError(
                f"{path}: column {name!r} row {i + 1}: cannot parse {c!r} as a number"
            ) from None
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0]) + 1
        raise DataError(f"{path}: column {name!r} row {bad}: non-finite value")
    return out


def _is_numeric(cells: list[str]) -> bool:
    for c in cells:
        if c == "":
            continue
        try:
            float(c)
        except ValueError:
            return False
    return True


def _build_encoding(header, rows, covariate_cols, path) -> list[tuple[str, list[str] | None]]:
    encoding = []
    for name in covariate_cols:
        cells = _column(header, rows, name, path)
        if _is_numeric(cells):
            encoding.append((name, None))
        else:
            levels = sorted(set(cells) - {""})
            encoding.append((name, levels))
    return encoding


def _apply_encoding(header, rows, encoding, path) -> tuple[list[str], np.ndarray]:
    names: list[str] = ["(intercept)"]
    columns: list[np.ndarray] = [np.ones(len(rows))]
    for name, levels in encoding:
        cells = _column(header, rows, name, path)
        if levels is None:
            columns.append(_numeric_column(cells, name, path))
            names.append(name)
        else:
            missing = [i + 1 for i, c in enumerate(cells) if c == ""]
            if missing:
                shown = ", ".join(map(str, missing[:10]))
                raise DataError(f"{path}: column {name!r} missing on row(s) {shown}")
            known = set(levels)
            for i, c in enumerate(cells):
                if c not in known:
                    raise DataError(
                        f"{path}: column {name!r} row {i + 1}: unseen level {c!r}"
                    )
            # reference level (lexicographically first) is dropped
            for level in levels[1:]:
                columns.append(np.array([1.0 if c == level else 0.0 for c in cells]))
                names.append(f"{name}={level}")
    return names, np.column_stack(columns)


def ingest(
    path: str,
    response: str | None = None,
    index_col: str | None = None,
    hour_col: str | None = None,
    encoding=None,
    covariates: bool = True,
) -> Dataset:
    """Load a CSV file into a typed dataset.

    Column typing is inferred (a covariate column is numeric when every
    nonempty cell parses as a number, categorical otherwise) unless a
    training ``encoding`` is supplied, in which case it is replayed.  Rows
    with missing required fields raise :class:`DataError` naming the rows.
    """
    header, rows = _read_table(path)
    special = {c for c in (response, index_col, hour_col) if c}
    for c in special:
        if c not in header:
            raise DataError(f"{path}: missing column {c!r}")

    y = _numeric_column(_column(header, rows, response, path), response, path) if response else None
    index = (
        _numeric_column(_column(header, rows, index_col, path), index_col, path)
        if index_col
        else None
    )
    hour = None
    if hour_col:
        hour = _numeric_column(_column(header, rows, hour_col, path), hour_col, path)
        if np.any(hour < 0) or np.any(hour > 23):
            bad = int(np.flatnonzero((hour < 0) | (hour > 23))[0]) + 1
            raise DataError(f"{path}: column {hour_col!r} row {bad}: hour outside 0..23")

    X = None
    names: list[str] = []
    used_encoding: list[tuple[str, list[str] | None]] = []
    if covariates:
        if encoding is None:
            cov_cols = [c for c in header if c not in special]
            used_encoding = _build_encoding(header, rows, cov_cols, path)
        else:
            used_encoding = [(name, list(levels) if levels else None) for name, levels in encoding]
        if used_encoding:
            names, X = _apply_encoding(header, rows, used_encoding, path)
    return Dataset(
        n=len(rows),
        covariate_names=names,
        X=X,
        y=y,
        index=index,
        hour=hour,
        encoding=used_encoding,
    )


# ----------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


class _OutputTracker:
    """Records written files so failures leave no partial outputs behind."""

    def __init__(self):
        self.paths: list[str] = []

    def path(self, out_dir: str, name: str) -> str:
        os.makedirs(out_dir, exist_ok=True)
        p = os.path.join(out_dir, name)
        self.paths.append(p)
        return p

    def cleanup(self):
        for p in self.paths:
            try:
                os.unlink(p)
            except OSError:
                pass


def _write_json(path: str, payload: dict, compact: bool = False):
    with open(path, "w", encoding="utf-8") as fh:
        if compact:
            json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        else:
            json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


# ----------------------------------------------------------------------
# shared command plumbing
# ----------------------------------------------------------------------


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise UsageError(f"{flag}: cannot parse {text!r} as a comma-separated float list")
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


def _parse_quantile_grid(text: str) -> np.ndarray:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--quantiles range must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"--quantiles: cannot parse {text!r}") from None
        if step <= 0 or not 0 < start <= stop < 1:
            raise UsageError("--quantiles range must satisfy 0 < start <= stop < 1, step > 0")
        count = int(round((stop - start) / step)) + 1
        grid = start + step * np.arange(count)
        grid = grid[(grid > 0) & (grid < 1)]
    else:
        grid = np.asarray(_parse_float_list(text, "--quantiles"))
        if np.any(grid <= 0) or np.any(grid >= 1):
            raise UsageError("--quantiles values must lie strictly between 0 and 1")
    return np.round(grid, 12)


def _standardized_response(ds: Dataset, hour_col: str | None):
    """Response on the model scale plus the row mask kept after standardization."""
    if ds.y is None:
        raise DataError("response column required")
    if hour_col:
        y = standardize_los(ds.y, ds.hour)
        keep = y > 0.0
        return y[keep], keep
    return ds.y, np.ones(ds.n, dtype=bool)


def _load_model(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as err:
        raise DataError(f"cannot read model file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise DataError(f"model file {path} is not valid JSON: {err}") from err
    return dim.model_from_dict(payload)


def _model_inputs_from_test(model, meta, args, need_response=True):
    """Ingest the test file with the training schema; returns (ds, X, index, kept_mask, y)."""
    # the hour column only matters when the response is standardized for scoring
    hour_col = meta.get("hour_col") if need_response else None
    response = meta.get("response")
    external = model.config.index_source == "external_column"
    ds = ingest(
        args.test,
        response=response if need_response else None,
        index_col=meta.get("index_col") if external else None,
        hour_col=hour_col,
        encoding=meta.get("encoding") if not external else None,
        covariates=not external,
    )
    y, keep = (None, np.ones(ds.n, dtype=bool))
    if ds.y is not None:
        y, keep = _standardized_response(ds, hour_col)
    X = ds.X[keep] if ds.X is not None else None
    index = ds.index[keep] if ds.index is not None else None
    if not external and X is not None and model.columns is not None:
        if list(model.columns) != ds.covariate_names:
            raise DataError(
                "test design columns do not match the training design; "
                f"expected {list(model.columns)}"
            )
    return ds, X, index, keep, y


def _predict_chunks(model, X, index):
    n = X.shape[0] if X is not None else index.size
    for start in range(0, n, PREDICT_CHUNK):
        stop = min(start + PREDICT_CHUNK, n)
        yield dim.predict_dim(
            model,
            X_new=X[start:stop] if X is not None else None,
            external_index=index[start:stop] if index is not None else None,
        )


def _point_forecasts(model, X, index, args, ds, keep):
    """Point forecasts on the response scale, or None when unavailable."""
    point_col = getattr(args, "point_col", None)
    if point_col:
        header, rows = _read_table(args.test)
        cells = _column(header, rows, point_col, args.test)
        return _numeric_column(cells, point_col, args.test)[keep]
    if model.config.index_source == "builtin_ols":
        acc = np.zeros(X.shape[0])
        for mb in model.members:
            acc += inverse_transform(
                mb.index_model.response_transform, index_values(mb.index_model, X)
            )
        return acc / len(model.members)
    return None


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def cmd_fit(args, tracker: _OutputTracker) -> int:
    ds = ingest(
        args.train,
        response=args.response,
        index_col=args.index_col,
        hour_col=args.hour_col,
        covariates=args.index_col is None,
    )
    y, keep = _standardized_response(ds, args.hour_col)
    if y.size == 0:
        raise DataError("no rows remain after excluding nonpositive standardized stays")
    dropped = int(ds.n - y.size)
    if dropped:
        print(f"excluded {dropped} row(s) with nonpositive standardized stay", file=sys.stderr)

    if args.index_col is not None:
        config = dim.DimConfig(
            xi=args.xi, n_splits=args.splits, seed=args.seed,
            transform=args.transform, index_source="external_column",
            no_split=args.no_split,
        )
        model = dim.fit_dim(None, y, config, external_index=ds.index[keep])
    else:
        config = dim.DimConfig(
            xi=args.xi, n_splits=args.splits, seed=args.seed,
            transform=args.transform, index_source="builtin_ols",
            no_split=args.no_split,
        )
        model = dim.fit_dim(ds.X[keep], y, config, columns=ds.covariate_names)

    metadata = {
        "response": args.response,
        "index_col": args.index_col,
        "hour_col": args.hour_col,
        "encoding": [[name, levels] for name, levels in ds.encoding],
        "train_responses": [float(v) for v in y],
    }
    path = tracker.path(args.out_dir, "model.json")
    _write_json(path, dim.model_to_dict(model, metadata), compact=True)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_predict(args, tracker: _OutputTracker) -> int:
    model, meta = _load_model(args.model)
    _, X, index, keep, _ = _model_inputs_from_test(model, meta, args, need_response=False)
    grid = _parse_quantile_grid(args.quantiles)

    pred_path = tracker.path(args.out_dir, "predictions.csv")
    header = ["row"] + [f"q{a:.10g}" for a in grid]
    cdf_payload = []
    rows = []
    row_ids = np.flatnonzero(keep) + 1
    pos = 0
    for chunk in _predict_chunks(model, X, index):
        for d in chunk:
            rows.append([int(row_ids[pos])] + [float(q) for q in d.quantile(grid)])
            if args.cdfs:
                cdf_payload.append(
                    {"points": d.points.tolist(), "cumprobs": d.cumprobs.tolist()}
                )
            pos += 1
    _write_csv(pred_path, header, rows)
    print(f"wrote {pred_path}")
    if args.cdfs:
        cdf_path = tracker.path(args.out_dir, "cdfs.json")
        _write_json(cdf_path, {"cdfs": cdf_payload}, compact=True)
        print(f"wrote {cdf_path}")
    return EXIT_OK


def cmd_evaluate(args, tracker: _OutputTracker) -> int:
    model, meta = _load_model(args.model)
    if not meta.get("response"):
        raise DataError("model carries no response column name; cannot evaluate")
    ds, X, index, keep, y = _model_inputs_from_test(model, meta, args)
    if y is None or y.size == 0:
        raise DataError("no evaluable rows in the test file")

    forecasts = []
    for chunk in _predict_chunks(model, X, index):
        forecasts.extend(chunk)
    thresholds = _parse_float_list(args.thresholds, "--thresholds")

    train_responses = np.asarray(meta.get("train_responses", []), dtype=float)
    if train_responses.size == 0:
        raise DataError("model carries no training responses for the ECDF baseline")
    ecdf = evaluation.ecdf_forecaster(train_responses)
    ecdf_crps = np.array([ecdf.crps(v) for v in y])

    points = _point_forecasts(model, X, index, args, ds, keep)
    point_err = np.abs(points - y) if points is not None else None

    baselines = {"ecdf_mean_crps": float(ecdf_crps.mean())}
    if point_err is not None:
        baselines["point_mae"] = float(point_err.mean())
    report = evaluation.build_report(
        forecasts,
        y,
        thresholds=thresholds,
        n_bins=args.pit_bins,
        seed=args.seed,
        baselines=baselines,
    )
    report.comparisons["dim_vs_ecdf"] = evaluation.wilcoxon_signed_rank(
        report.crps, ecdf_crps
    )
    crps, pit, pit_counts = report.crps, report.pit, report.pit_counts
    diagrams = report.reliability
    wilcoxon_ecdf = report.comparisons["dim_vs_ecdf"]

    summary = {
        "n": int(y.size),
        "mean_crps": report.mean_crps,
        "baselines": {
            "ecdf_mean_crps": baselines["ecdf_mean_crps"],
            "point_mae": baselines.get("point_mae"),
        },
        "wilcoxon_dim_vs_ecdf": {
            "statistic": wilcoxon_ecdf.statistic,
            "p_value": wilcoxon_ecdf.p_value,
            "n_effective": wilcoxon_ecdf.n_effective,
            "method": wilcoxon_ecdf.method,
        },
        "pit_bins": [int(c) for c in pit_counts],
        "thresholds": thresholds,
    }

    eval_csv = tracker.path(args.out_dir, "eval.csv")
    header = ["row", "y", "crps", "ecdf_crps", "pit"]
    if point_err is not None:
        header.append("point_abs_error")
    row_ids = np.flatnonzero(keep) + 1
    rows = []
    for i in range(y.size):
        row = [int(row_ids[i]), y[i], crps[i], ecdf_crps[i], pit[i]]
        if point_err is not None:
            row.append(point_err[i])
        rows.append(row)
    _write_csv(eval_csv, header, rows)

    rel_csv = tracker.path(args.out_dir, "reliability.csv")
    rel_rows = [
        [diag.threshold, b.lo, b.hi, b.count, b.mean_forecast, b.observed_freq, b.flagged]
        for diag in diagrams
        for b in diag.bins
    ]
    _write_csv(
        rel_csv,
        ["threshold", "bin_lo", "bin_hi", "count", "mean_forecast", "observed_freq", "flagged"],
        rel_rows,
    )

    pit_csv = tracker.path(args.out_dir, "pit.csv")
    edges = np.linspace(0.0, 1.0, args.pit_bins + 1)
    _write_csv(
        pit_csv,
        ["bin_lo", "bin_hi", "count"],
        [[edges[i], edges[i + 1], int(pit_counts[i])] for i in range(args.pit_bins)],
    )

    json_path = tracker.path(args.out_dir, "eval.json")
    _write_json(json_path, summary)
    for p in (eval_csv, rel_csv, pit_csv, json_path):
        print(f"wrote {p}")
    return EXIT_OK


def cmd_simulate(args, tracker: _OutputTracker) -> int:
    alpha = _parse_float_list(args.alpha, "--alpha")
    sizes = [int(v) for v in _parse_float_list(args.sizes, "--sizes")]
    dgp = sim.SyntheticDgp(alpha=np.asarray(alpha), family=args.family, seed=args.seed)
    result = sim.rate_experiment(
        dgp, sizes=sizes, reps=args.reps, xi=args.xi,
    )
    path = tracker.path(args.out_dir, "rate.csv")
    rows = [
        [n, med, norm, len(errs)]
        for n, med, norm, errs in zip(
            result.sizes, result.median_errors, result.normalized_errors, result.errors
        )
    ]
    _write_csv(path, ["n", "median_sup_error", "normalized_error", "reps"], rows)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_diagnose(args, tracker: _OutputTracker) -> int:
    ds = ingest(
        args.train,
        response=args.response,
        index_col=args.index_col,
        hour_col=args.hour_col,
        covariates=args.index_col is None,
    )
    y, keep = _standardized_response(ds, args.hour_col)
    if y.size < 2:
        raise DataError("need at least two rows to diagnose")
    if args.index_col is not None:
        idx_vals = ds.index[keep]
    else:
        model = fit_ols_index(ds.X[keep], y, args.transform, columns=ds.covariate_names)
        idx_vals = index_values(model, ds.X[keep])

    rho = spearman(idx_vals, y)
    edges = np.quantile(idx_vals, np.linspace(0.0, 1.0, args.diag_bins + 1))
    edges = np.unique(edges)
    if edges.size < 2:
        raise DataError("index values are constant; cannot form bins")
    edges[-1] = np.nextafter(edges[-1], np.inf)
    bins = [(edges[i], edges[i + 1]) for i in range(edges.size - 1)]
    stratified = binned_ecdfs(idx_vals, y, bins)

    json_path = tracker.path(args.out_dir, "diagnose.json")
    _write_json(
        json_path,
        {
            "spearman": rho,
            "n": int(y.size),
            "bins": [
                {"lo": lo, "hi": hi, "count": d.n_points}
                for (lo, hi), d in stratified
            ],
        },
    )
    csv_path = tracker.path(args.out_dir, "binned_ecdf.csv")
    rows = []
    for (lo, hi), d in stratified:
        for pt, cp in zip(d.points, d.cumprobs):
            rows.append([lo, hi, pt, cp])
    _write_csv(csv_path, ["bin_lo", "bin_hi", "point", "cumprob"], rows)
    print(f"wrote {json_path}")
    print(f"wrote {csv_path}")
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing and dispatch
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimreg",
        description="Distributional regression with a pseudo-index and isotonic CDF estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out-dir", required=True, help="directory for output files")
        p.add_argument("--seed", type=int, default=0)

    p_fit = sub.add_parser("fit", help="fit a model from a training CSV")
    p_fit.add_argument("--train", required=True)
    p_fit.add_argument("--response", required=True)
    p_fit.add_argument("--index-col", default=None, help="use this column as a precomputed index")
    p_fit.add_argument("--hour-col", default=None, help="admission-hour column for LoS standardization")
    p_fit.add_argument("--xi", type=float, default=0.5)
    p_fit.add_argument("--splits", type=int, default=100)
    p_fit.add_argument("--transform", choices=("identity", "log1p"), default="identity")
    p_fit.add_argument("--no-split", action="store_true",
                       help="fit index and distributions on all rows (no consistency guarantee)")
    add_common(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_pred = sub.add_parser("predict", help="predictive quantiles (and CDFs) for a test CSV")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--test", required=True)
    p_pred.add_argument("--quantiles", default="0.005:0.995:0.005")
    p_pred.add_argument("--cdfs", action="store_true", help="also write full step CDFs as JSON")
    add_common(p_pred)
    p_pred.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="score a fitted model on a test CSV")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--test", required=True)
    p_eval.add_argument("--thresholds", default="1,5,9,13")
    p_eval.add_argument("--pit-bins", type=int, default=20)
    p_eval.add_argument("--point-col", default=None,
                        help="column with external point forecasts for the MAE baseline")
    add_common(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_sim = sub.add_parser("simulate", help="run the consistency-rate experiment")
    p_sim.add_argument("--sizes", default="500,2000,8000")
    p_sim.add_argument("--reps", type=int, default=20)
    p_sim.add_argument("--xi", type=float, default=0.5)
    p_sim.add_argument("--family", choices=sim.FAMILIES, default="gaussian_shift")
    p_sim.add_argument("--alpha", default="1.0,1.0", help="true index coefficients")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_diag = sub.add_parser("diagnose", help="index monotonicity diagnostics")
    p_diag.add_argument("--train", required=True)
    p_diag.add_argument("--response", required=True)
    p_diag.add_argument("--index-col", default=None)
    p_diag.add_argument("--hour-col", default=None)
    p_diag.add_argument("--transform", choices=("identity", "log1p"), default="identity")
    p_diag.add_argument("--diag-bins", type=int, default=4)
    add_common(p_diag)
    p_diag.set_defaults(func=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tracker = _OutputTracker()
    try:
        return args.func(args, tracker)
    except UsageError as err:
        tracker.cleanup()
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as err:
        tracker.cleanup()
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (
        RankDeficiencyError,
        UndefinedCorrelationError,
        DegenerateConditioningError,
        np.linalg.LinAlgError,
        ValueError,
    ) as err:
        tracker.cleanup()
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


def entry_point():  # pragma: no cover - console script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
