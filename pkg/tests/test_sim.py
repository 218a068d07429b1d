import math

import numpy as np
import pytest

from dimreg import dim, idr, sim


def test_alpha_all_zero_rejected():
    with pytest.raises(ValueError):
        sim.SyntheticDgp(alpha=np.zeros(3))
    with pytest.raises(ValueError):
        sim.SyntheticDgp(alpha=np.array([1.0]), family="weibull")


def test_generate_is_deterministic():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 0.5]), seed=9)
    X1, y1, t1 = sim.generate(dgp, 200)
    X2, y2, t2 = sim.generate(dgp, 200)
    assert np.array_equal(X1, X2) and np.array_equal(y1, y2) and np.array_equal(t1, t2)
    X3, _, _ = sim.generate(dgp, 200, seed=10)
    assert not np.array_equal(X1, X3)


def test_gaussian_responses_center_on_index():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0]), seed=3)
    rng = np.random.default_rng(17)
    n = 40_000
    for x in (0.2, 0.8):
        ys = dgp.sample_responses(rng, np.full(n, x))
        assert abs(ys.mean() - x) < 4.0 / math.sqrt(n)


def test_exp_scale_responses_center_on_mean():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0]), family="exp_scale", seed=3)
    rng = np.random.default_rng(19)
    n = 100_000
    theta = 0.5
    ys = dgp.sample_responses(rng, np.full(n, theta))
    # exponential sd equals the mean
    assert abs(ys.mean() - math.exp(theta)) < 4.0 * math.exp(theta) / math.sqrt(n)


def test_true_cdf_lipschitz_in_index():
    for family in sim.FAMILIES:
        dgp = sim.SyntheticDgp(alpha=np.array([1.0]), family=family)
        L = dgp.lipschitz_bound
        us = np.linspace(0.0, 1.0, 21)
        ys = np.linspace(-3.0, 8.0, 111)
        F = dgp.true_cdf(us, ys)
        du = us[1] - us[0]
        assert np.max(np.abs(np.diff(F, axis=0))) <= L * du + 1e-12


def test_true_cdf_is_valid():
    for family in sim.FAMILIES:
        dgp = sim.SyntheticDgp(alpha=np.array([1.0]), family=family)
        F = dgp.true_cdf(np.linspace(0, 1, 7), np.linspace(-5, 10, 200))
        assert np.all(F >= 0.0) and np.all(F <= 1.0)
        assert np.all(np.diff(F, axis=1) >= -1e-15)


def test_index_spacing_soft_check():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), seed=5)
    _, _, theta = sim.generate(dgp, 2000)
    spacing = float(np.max(np.diff(np.sort(theta))))
    bound = 10.0 * (theta.max() - theta.min()) / theta.size
    # soft density check, reported rather than asserted
    print(f"max index spacing {spacing:.5f} vs guideline {bound:.5f}")


def test_sup_error_bounded_by_one():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), seed=11)
    X, y, _ = sim.generate(dgp, 400)
    model = dim.fit_dim(X, y, dim.DimConfig(n_splits=1, seed=11))
    res = sim.sup_error(model, dgp, eval_points=200)
    assert not res.degenerate
    assert 0.0 < res.value <= 1.0


def test_sup_error_degenerate_window():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0]), seed=13)
    # two training rows leave a single-index member whose interior window is empty
    y = np.array([0.1, 0.9])
    theta = np.array([0.4, 0.6])
    config = dim.DimConfig(n_splits=1, seed=13, index_source="external_column")
    model = dim.fit_dim(None, y, config, external_index=theta)
    res = sim.sup_error(model, dgp, eval_points=100)
    assert res.degenerate
    assert res.n_points == 0


def test_sup_error_vectorized_curve_matches_predict():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), seed=17)
    X, y, _ = sim.generate(dgp, 300)
    model = dim.fit_dim(X, y, dim.DimConfig(n_splits=1, seed=17))
    fit = model.members[0].idr_fit
    y_grid = np.linspace(y.min() - 1, y.max() + 1, 50)
    us = np.linspace(fit.indices[0], fit.indices[-1], 9)
    curve = sim._member_curve(fit, us, y_grid)
    for i, u in enumerate(us):
        np.testing.assert_array_equal(curve[i], idr.predict(fit, float(u)).cdf(y_grid))


def test_true_index_passthrough_large_sample():
    # with the true index supplied, the interior CDF error at n = 100000
    # sits below the 0.05 scale of (log n / n)**(1/3)
    n = 100_000
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), seed=23)
    X, y, theta = sim.generate(dgp, n)
    n1 = dim.split_size(n, 0.5)
    perm = dim.member_rng(23, 0).permutation(n)
    part1 = perm[:n1]
    th1, y1 = theta[part1], y[part1]

    rng = np.random.default_rng(29)
    X_eval = dgp.sample_covariates(rng, 400)
    th_eval = dgp.index_of(X_eval)
    lo, hi = float(th1.min()), float(th1.max())
    margin = 0.1 * (hi - lo)
    delta = (math.log(n) / n) ** (1.0 / 3.0)
    keep = (th_eval >= lo + margin + delta) & (th_eval <= hi - margin - delta)
    assert np.sum(keep) > 100
    th_eval = th_eval[keep]

    y_grid = np.linspace(y1.min() - 2.0, y1.max() + 2.0, 512)
    indices, cols = idr.fit_cdf_columns(th1, y1, y_grid)
    pos = np.searchsorted(indices, th_eval)
    exact = (pos < indices.size) & (indices[np.minimum(pos, indices.size - 1)] == th_eval)
    assert not np.any(exact)  # continuous indices: interpolation everywhere
    lam = (indices[pos] - th_eval) / (indices[pos] - indices[pos - 1])
    hi_rows = cols[pos - 1]
    lo_rows = cols[pos]
    fitted = lo_rows + lam[:, None] * (hi_rows - lo_rows)
    truth = dgp.true_cdf(th_eval, y_grid)
    assert float(np.max(np.abs(fitted - truth))) < 0.05


def test_exp_scale_pipeline_beats_unconditional_ecdf():
    from dimreg import evaluation

    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), family="exp_scale", seed=37)
    X, y, _ = sim.generate(dgp, 2000)
    X_test, y_test, _ = sim.generate(dgp, 500, seed=38)
    model = dim.fit_dim(X, y, dim.DimConfig(n_splits=4, seed=37, transform="log1p"))
    forecasts = dim.predict_dim(model, X_new=X_test)
    crps_model = evaluation.mean_crps(forecasts, y_test)
    ecdf = evaluation.ecdf_forecaster(y)
    crps_ecdf = evaluation.mean_crps([ecdf] * y_test.size, y_test)
    assert crps_model < crps_ecdf


def test_rate_experiment_smoke_and_reproducible():
    dgp = sim.SyntheticDgp(alpha=np.array([1.0, 1.0]), seed=31)
    r1 = sim.rate_experiment(dgp, sizes=(300, 900), reps=2, eval_points=128, y_grid_size=128)
    r2 = sim.rate_experiment(dgp, sizes=(300, 900), reps=2, eval_points=128, y_grid_size=128)
    assert r1 == r2
    assert len(r1.median_errors) == 2
    assert all(v > 0 for v in r1.median_errors)
    with pytest.raises(ValueError):
        sim.rate_experiment(dgp, sizes=(900, 300), reps=1)
