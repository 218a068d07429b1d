import numpy as np
import pytest

from dimreg.stepdist import StepDistribution, ThresholdMeasure, mixture

from _oracles import crps_quadrature, random_step_distribution

TWO_STEP = StepDistribution(np.array([0.0, 1.0]), np.array([0.5, 1.0]))


def test_cdf_point_mass():
    d = StepDistribution.point_mass(2.0)
    assert d.cdf(2.0) == 1.0
    assert d.cdf(1.999) == 0.0


def test_cdf_step_plateau():
    assert TWO_STEP.cdf(0.5) == 0.5


def test_cdf_left_limit_at_jump():
    assert TWO_STEP.cdf_left(1.0) == 0.5
    assert TWO_STEP.cdf(1.0) == 1.0


def test_cdf_vectorized():
    ys = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    np.testing.assert_array_equal(TWO_STEP.cdf(ys), [0.0, 0.5, 0.5, 1.0, 1.0])


def test_quantile_examples():
    assert TWO_STEP.quantile(0.5) == 0.0
    assert TWO_STEP.quantile(0.75) == 1.0
    d = StepDistribution.point_mass(2.0)
    for alpha in (0.01, 0.5, 0.99):
        assert d.quantile(alpha) == 2.0


def test_quantile_rejects_boundary_alpha():
    for alpha in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            TWO_STEP.quantile(alpha)


def test_crps_point_mass_is_zero():
    assert StepDistribution.point_mass(2.0).crps(2.0) == 0.0


def test_crps_two_step_values():
    # independent quadrature oracle, then the frozen values
    oracle_0 = crps_quadrature(TWO_STEP.points, TWO_STEP.cumprobs, 0.0)
    oracle_2 = crps_quadrature(TWO_STEP.points, TWO_STEP.cumprobs, 2.0)
    assert abs(oracle_0 - 0.25) < 1e-8
    assert abs(oracle_2 - 1.25) < 1e-8
    assert TWO_STEP.crps(0.0) == pytest.approx(0.25, abs=1e-12)
    assert TWO_STEP.crps(2.0) == pytest.approx(1.25, abs=1e-12)


def test_crps_matches_quadrature_randomized():
    rng = np.random.default_rng(7)
    for _ in range(25):
        pts, cum = random_step_distribution(rng)
        d = StepDistribution(pts, cum)
        y = float(rng.uniform(pts[0] - 1.5, pts[-1] + 1.5))
        exact = d.crps(y)
        assert exact >= 0.0
        assert abs(exact - crps_quadrature(pts, cum, y)) < 1e-6


def test_crps_zero_iff_point_mass_at_observation():
    rng = np.random.default_rng(8)
    for _ in range(20):
        pts, cum = random_step_distribution(rng)
        d = StepDistribution(pts, cum)
        y = float(rng.uniform(-4, 4))
        is_point_mass_at_y = d.n_points == 1 and d.points[0] == y
        assert (d.crps(y) == 0.0) == is_point_mass_at_y


def test_crps_weighted_lebesgue_equals_crps():
    mu = ThresholdMeasure.lebesgue()
    assert TWO_STEP.crps_weighted(0.0, mu) == TWO_STEP.crps(0.0)


def test_crps_weighted_single_atom():
    mu = ThresholdMeasure.discrete([0.5], [1.0])
    assert TWO_STEP.crps_weighted(0.0, mu) == pytest.approx(0.25, abs=1e-15)


def test_crps_weighted_zero_weights():
    mu = ThresholdMeasure.discrete([0.5, 1.5], [0.0, 0.0])
    assert TWO_STEP.crps_weighted(0.0, mu) == 0.0


def test_pit_point_mass_returns_v():
    d = StepDistribution.point_mass(3.0)
    assert d.pit(3.0, 0.3) == 0.3


def test_pit_below_support_is_zero():
    assert TWO_STEP.pit(-5.0, 0.7) == 0.0


def test_pit_at_jump():
    assert TWO_STEP.pit(0.0, 0.5) == 0.25


def test_pit_rejects_bad_v():
    with pytest.raises(ValueError):
        TWO_STEP.pit(0.0, 1.5)


def test_pit_uniform_under_self_sampling():
    # observation drawn from d itself makes the randomized PIT uniform
    rng = np.random.default_rng(11)
    pts = np.array([-1.0, 0.0, 0.5, 2.0])
    cum = np.array([0.2, 0.35, 0.75, 1.0])
    d = StepDistribution(pts, cum)
    probs = np.diff(np.concatenate(([0.0], cum)))
    n = 100_000
    ys = rng.choice(pts, size=n, p=probs)
    vs = rng.random(n)
    pit = np.array([d.pit(y, v) for y, v in zip(ys, vs)])
    sorted_pit = np.sort(pit)
    grid = np.arange(1, n + 1) / n
    ks = max(
        float(np.max(np.abs(sorted_pit - grid))),
        float(np.max(np.abs(sorted_pit - (grid - 1.0 / n)))),
    )
    assert ks < 0.01


def test_mixture_identical_components_is_exact():
    parts = [TWO_STEP, TWO_STEP, TWO_STEP]
    out = mixture(parts)
    assert np.array_equal(out.points, TWO_STEP.points)
    assert np.array_equal(out.cumprobs, TWO_STEP.cumprobs)


def test_mixture_two_point_masses():
    out = mixture([StepDistribution.point_mass(0.0), StepDistribution.point_mass(1.0)], [0.5, 0.5])
    np.testing.assert_array_equal(out.points, [0.0, 1.0])
    np.testing.assert_array_equal(out.cumprobs, [0.5, 1.0])


def test_mixture_zero_weight_component_dropped():
    other = StepDistribution.point_mass(9.0)
    out = mixture([TWO_STEP, other], [1.0, 0.0])
    assert out == TWO_STEP


def test_mixture_weight_validation():
    with pytest.raises(ValueError):
        mixture([TWO_STEP, TWO_STEP], [0.6, 0.6])
    with pytest.raises(ValueError):
        mixture([], [])
    with pytest.raises(ValueError):
        mixture([TWO_STEP], [-1.0])


def test_mixture_pointwise_equality():
    rng = np.random.default_rng(13)
    parts = []
    for _ in range(4):
        pts, cum = random_step_distribution(rng)
        parts.append(StepDistribution(pts, cum))
    w = rng.random(4) + 0.1
    w /= w.sum()
    mixed = mixture(parts, w)
    zs = rng.uniform(-4, 4, 1000)
    expected = sum(wi * d.cdf(zs) for wi, d in zip(w, parts))
    assert np.max(np.abs(mixed.cdf(zs) - expected)) <= 1e-12


def test_quantile_cdf_galois_connection():
    rng = np.random.default_rng(17)
    for _ in range(20):
        pts, cum = random_step_distribution(rng)
        d = StepDistribution(pts, cum)
        ys = np.unique(
            np.concatenate([pts, pts - 1e-9, pts + 1e-9, [pts[0] - 1.0, pts[-1] + 1.0]])
        )
        for alpha in np.linspace(0.05, 0.95, 10):
            q = d.quantile(alpha)
            for y in ys:
                assert (q <= y) == (alpha <= d.cdf(y))


def test_threshold_measure_validation():
    with pytest.raises(ValueError):
        ThresholdMeasure.discrete([0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        ThresholdMeasure.discrete([0.0], [-1.0])
    with pytest.raises(ValueError):
        ThresholdMeasure.discrete([np.inf], [1.0])
    with pytest.raises(ValueError):
        ThresholdMeasure("counting")


def test_validation_rejects_bad_inputs():
    with pytest.raises(ValueError):
        StepDistribution(np.array([1.0, 0.5]), np.array([0.5, 1.0]))
    with pytest.raises(ValueError):
        StepDistribution(np.array([0.0, 1.0]), np.array([0.7, 0.6]))
    with pytest.raises(ValueError):
        StepDistribution(np.array([0.0, 1.0]), np.array([0.5, 0.9]))
    with pytest.raises(ValueError):
        StepDistribution(np.array([0.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        StepDistribution(np.array([]), np.array([]))


def test_immutability():
    with pytest.raises(ValueError):
        TWO_STEP.points[0] = 5.0


def test_from_cdf_values_coalesces_plateaus():
    d = StepDistribution.from_cdf_values([0.0, 1.0, 2.0, 3.0], [0.0, 0.4, 0.4, 1.0])
    np.testing.assert_array_equal(d.points, [1.0, 3.0])
    np.testing.assert_array_equal(d.cumprobs, [0.4, 1.0])


def test_from_sample_duplicates():
    d = StepDistribution.from_sample([1.0, 1.0, 2.0])
    np.testing.assert_array_equal(d.points, [1.0, 2.0])
    np.testing.assert_array_equal(d.cumprobs, [2.0 / 3.0, 1.0])
