"""Independent reference computations used to check the library.

Everything here is deliberately brute force: fine-grid integration,
exhaustive enumeration of block partitions, sign patterns, and monotone
vectors.  None of it shares code with the implementation paths it checks.
"""

import itertools

import numpy as np
from scipy.stats import rankdata


def crps_quadrature(points, cumprobs, y, step=1e-4, pad=1.0):
    """Left-endpoint Riemann sum of the squared CDF error on a fine grid.

    The grid is the uniform step grid over the support hull padded by
    ``pad``, refined with the exact jump locations, so the piecewise
    constant integrand is summed without discretization bias.
    """
    points = np.asarray(points, dtype=float)
    cumprobs = np.asarray(cumprobs, dtype=float)
    breaks = np.union1d(points, [float(y)])
    lo, hi = breaks[0] - pad, breaks[-1] + pad
    grid = np.union1d(np.arange(lo, hi + step, step), breaks)
    left = grid[:-1]
    idx = np.searchsorted(points, left, side="right")
    cdf = np.where(idx > 0, cumprobs[np.maximum(idx - 1, 0)], 0.0)
    indicator = left >= y
    return float(np.sum((cdf - indicator) ** 2 * np.diff(grid)))


def antitonic_lsq(z, w=None):
    """Weighted least squares fit of a nonincreasing vector, by enumerating
    all consecutive block partitions and keeping the feasible minimum."""
    z = np.asarray(z, dtype=float)
    n = z.size
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    best_obj = np.inf
    best = None
    for mask in range(1 << (n - 1)):
        fitted = np.empty(n)
        prev_mean = np.inf
        feasible = True
        start = 0
        for i in range(n):
            if i == n - 1 or (mask >> i) & 1:
                ww = w[start : i + 1]
                mval = float(np.dot(ww, z[start : i + 1]) / ww.sum())
                if mval > prev_mean:
                    feasible = False
                    break
                fitted[start : i + 1] = mval
                prev_mean = mval
                start = i + 1
        if not feasible:
            continue
        obj = float(np.dot(w, (z - fitted) ** 2))
        if obj < best_obj:
            best_obj = obj
            best = fitted
    return best


def pinball_objective(y, beta, alpha):
    """Sum of quantile-loss terms (1{y_j <= b_j} - alpha) * (b_j - y_j)."""
    y = np.asarray(y, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return float(np.sum(((y <= beta).astype(float) - alpha) * (beta - y)))


def monotone_vectors(grid, n):
    """All nondecreasing length-n vectors with entries from grid."""
    for combo in itertools.combinations_with_replacement(sorted(grid), n):
        yield np.asarray(combo, dtype=float)


def wilcoxon_exact_enumeration(d):
    """Two-sided signed-rank p-value by enumerating every sign pattern."""
    d = np.asarray(d, dtype=float)
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        return 0.0, 1.0
    ranks = rankdata(np.abs(d))
    w_obs = float(ranks[d > 0].sum())
    sums = np.array(
        [
            sum(r for r, s in zip(ranks, signs) if s)
            for signs in itertools.product((0, 1), repeat=n)
        ]
    )
    cdf = float(np.mean(sums <= w_obs))
    sf = float(np.mean(sums >= w_obs))
    return w_obs, min(1.0, 2.0 * min(cdf, sf))


def wilcoxon_exact_convolution(d):
    """Exact signed-rank p-value via polynomial convolution over doubled ranks."""
    d = np.asarray(d, dtype=float)
    d = d[d != 0.0]
    n = d.size
    ranks = rankdata(np.abs(d))
    w_obs = float(ranks[d > 0].sum())
    poly = np.array([1.0])
    for r in np.rint(2.0 * ranks).astype(int):
        term = np.zeros(r + 1)
        term[0] = 1.0
        term[r] = 1.0
        poly = np.convolve(poly, term)
    poly /= poly.sum()
    w2 = int(round(2.0 * w_obs))
    cdf = float(poly[: w2 + 1].sum())
    sf = float(poly[w2:].sum())
    return w_obs, min(1.0, 2.0 * min(cdf, sf))


def random_step_distribution(rng, max_points=8, span=3.0):
    """Random step CDF with well-separated cumulative probabilities."""
    m = int(rng.integers(1, max_points + 1))
    pts = np.sort(rng.uniform(-span, span, m))
    pts = np.unique(pts)
    w = rng.random(pts.size) + 0.05
    cum = np.cumsum(w / w.sum())
    cum[-1] = 1.0
    return pts, cum


def random_increasing_piecewise_linear(rng, lo, hi, knots=6, min_slope=0.2, max_slope=3.0):
    """Strictly increasing piecewise-linear map covering [lo, hi]."""
    xs = np.linspace(lo - 1.0, hi + 1.0, knots)
    slopes = rng.uniform(min_slope, max_slope, knots - 1)
    ys = np.concatenate(([0.0], np.cumsum(slopes * np.diff(xs)))) + rng.uniform(-1.0, 1.0)

    def transform(v):
        return np.interp(v, xs, ys)

    return transform
