import numpy as np
import pytest

from dimreg.index import (
    RankDeficiencyError,
    UndefinedCorrelationError,
    binned_ecdfs,
    fit_ols_index,
    index_values,
    inverse_transform,
    spearman,
    transform_response,
)


def test_ols_exact_linear_fit():
    X = np.array([[1.0], [2.0], [3.0]])
    y = np.array([2.0, 4.0, 6.0])
    model = fit_ols_index(X, y, "identity")
    assert model.coefficients == pytest.approx([2.0], abs=1e-12)


def test_ols_log1p_linearizes():
    x = np.linspace(0.0, 2.0, 12)
    X = np.column_stack([np.ones_like(x), x])
    a, b = 0.4, 1.3
    y = np.exp(a + b * x) - 1.0
    model = fit_ols_index(X, y, "log1p")
    assert model.coefficients == pytest.approx([a, b], abs=1e-10)


def test_ols_duplicated_column_is_rank_deficient():
    x = np.linspace(0.0, 1.0, 8)
    X = np.column_stack([x, x])
    with pytest.raises(RankDeficiencyError):
        fit_ols_index(X, x, "identity")


def test_ols_log1p_rejects_negative_responses():
    X = np.ones((3, 1))
    with pytest.raises(ValueError):
        fit_ols_index(X, np.array([0.5, -0.1, 1.0]), "log1p")


def test_ols_needs_enough_rows():
    with pytest.raises(ValueError):
        fit_ols_index(np.ones((1, 2)), np.array([1.0]), "identity")


def test_ols_residual_orthogonality():
    rng = np.random.default_rng(3)
    for transform in ("identity", "log1p"):
        X = rng.random((40, 3))
        y = np.abs(rng.normal(size=40))
        model = fit_ols_index(X, y, transform)
        resid = transform_response(transform, y) - X @ model.coefficients
        scale = float(np.abs(X).sum())
        assert np.max(np.abs(X.T @ resid)) <= 1e-8 * scale


def test_ols_recovers_noiseless_coefficients():
    rng = np.random.default_rng(5)
    X = rng.random((30, 4))
    alpha = np.array([0.5, -1.0, 2.0, 0.25])
    y = X @ alpha
    model = fit_ols_index(X, y, "identity")
    assert np.max(np.abs(model.coefficients - alpha)) <= 1e-10


def test_index_values_cases():
    model = fit_ols_index(np.eye(2), np.array([0.0, 0.0]), "identity")
    assert np.allclose(index_values(model, np.array([[3.0, 4.0]])), [0.0])
    from dimreg.index import IndexModel

    m = IndexModel(np.array([1.0, 1.0]))
    assert index_values(m, np.array([[2.0, 3.0]])) == pytest.approx([5.0])
    with pytest.raises(ValueError):
        index_values(m, np.array([[1.0, 2.0, 3.0]]))


def test_fitted_values_match_training_predictions():
    rng = np.random.default_rng(7)
    X = rng.random((25, 2))
    y = rng.normal(size=25)
    model = fit_ols_index(X, y, "identity")
    fitted = index_values(model, X)
    # identical to the least squares fitted values
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    assert np.allclose(fitted, X @ beta, atol=1e-12)


def test_inverse_transform_round_trip():
    y = np.array([0.0, 0.5, 3.0])
    assert np.allclose(inverse_transform("log1p", transform_response("log1p", y)), y)
    assert np.array_equal(inverse_transform("identity", y), y)


def test_spearman_examples():
    assert spearman([1.0, 2.0, 3.0], [10.0, 20.0, 30.0]) == 1.0
    assert spearman([1.0, 2.0, 3.0], [30.0, 20.0, 10.0]) == -1.0
    assert spearman([1.0, 2.0, 3.0], [1.0, 3.0, 2.0]) == pytest.approx(0.5, abs=1e-15)


def test_spearman_invariant_under_increasing_transforms():
    rng = np.random.default_rng(11)
    a = rng.normal(size=30)
    b = rng.normal(size=30)
    base = spearman(a, b)
    assert spearman(np.exp(a), b) == base
    assert spearman(a, 3.0 * b + 1.0) == base


def test_spearman_rejects_constants():
    with pytest.raises(UndefinedCorrelationError):
        spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        spearman([1.0], [2.0])


def test_spearman_average_ranks_for_ties():
    # hand-computed: ranks of a = (1.5, 1.5, 3), ranks of b = (1, 2, 3)
    a = np.array([5.0, 5.0, 9.0])
    b = np.array([1.0, 2.0, 3.0])
    assert spearman(a, b) == pytest.approx(np.sqrt(3.0) / 2.0, abs=1e-12)


def test_binned_ecdfs_single_bin_is_full_ecdf():
    y = np.array([3.0, 1.0, 2.0, 1.0])
    out = binned_ecdfs(np.zeros(4), y, [(-1.0, 1.0)])
    assert len(out) == 1
    (_, d), = out
    np.testing.assert_array_equal(d.points, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(d.cumprobs, [0.5, 0.75, 1.0])


def test_binned_ecdfs_empty_bins_omitted():
    out = binned_ecdfs([0.5, 0.6], [1.0, 2.0], [(0.0, 1.0), (5.0, 6.0)])
    assert len(out) == 1
    assert out[0][0] == (0.0, 1.0)


def test_binned_ecdfs_ordered_halves_are_stochastically_ordered():
    rng = np.random.default_rng(13)
    idx = np.concatenate([np.zeros(50), np.ones(50)])
    y = np.concatenate([rng.normal(0.0, 1.0, 50), rng.normal(2.0, 1.0, 50)])
    out = binned_ecdfs(idx, y, [(-0.5, 0.5), (0.5, 1.5)])
    assert len(out) == 2
    zs = np.linspace(y.min(), y.max(), 100)
    low, high = out[0][1], out[1][1]
    assert np.all(low.cdf(zs) >= high.cdf(zs) - 1e-12)


def test_binned_ecdfs_rejects_overlap():
    with pytest.raises(ValueError):
        binned_ecdfs([0.0], [1.0], [(0.0, 2.0), (1.0, 3.0)])
