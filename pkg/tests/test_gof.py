import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmcar import distributions as D
from qmcar import gof
from qmcar.lds import PointStream

UNIFORM = D.beta(1.0, 1.0)


def brute_star_2d(pts):
    """Independent oracle: every corner from coordinates, both count conventions."""
    n = len(pts)
    xs = sorted(set(pts[:, 0]) | {1.0})
    ys = sorted(set(pts[:, 1]) | {1.0})
    best = 0.0
    for a, b in itertools.product(xs, ys):
        closed = np.sum((pts[:, 0] <= a) & (pts[:, 1] <= b)) / n
        opened = np.sum((pts[:, 0] < a) & (pts[:, 1] < b)) / n
        best = max(best, closed - a * b, a * b - opened)
    return best


def test_ad_single_point():
    assert gof.anderson_darling([0.5], UNIFORM) == pytest.approx(-1 + 2 * math.log(2))


def test_ad_exact_quantiles_small():
    n = 1000
    d = D.gamma(2.4)
    x = D.inverse_cdf(d, (np.arange(1, n + 1) - 0.5) / n)
    assert gof.anderson_darling(x, d) < 0.02


def test_ad_values_vs_scipy_formula():
    from scipy import stats

    rng = np.random.default_rng(3)
    x = rng.normal(size=500)
    # scipy's anderson uses estimated parameters; recompute the known-parameter statistic directly
    xs = np.sort(x)
    F = stats.norm.cdf(xs)
    i = np.arange(1, 501)
    ref = -500 - np.sum((2 * i - 1) * (np.log(F) + np.log(1 - F[::-1]))) / 500
    assert gof.anderson_darling(x, D.normal()) == pytest.approx(ref, rel=1e-12)


def test_ad_clamps_edges():
    assert math.isfinite(gof.anderson_darling([0.0, 1.0, 0.5], UNIFORM))


@given(st.lists(st.floats(0.001, 0.999), min_size=2, max_size=50), st.randoms())
def test_ad_permutation_invariant_and_positive(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    a = gof.anderson_darling(xs, UNIFORM)
    assert a == pytest.approx(gof.anderson_darling(ys, UNIFORM), rel=1e-12)
    assert a > 0


def test_ad_qmc_aw_sample():
    from qmcar.samplers import beta_aw

    rec = beta_aw(0.5, 0.5, PointStream(2, "random_start_halton", 2), count=100_000)
    assert gof.anderson_darling(rec.accepted, D.beta(0.5, 0.5)) < 1.93


def test_ad_null_calibration():
    # uniform pseudorandom samples exceed the 5% point about 5% of the time
    vals = [gof.anderson_darling(PointStream(1, "pseudorandom", s).block(0, 2000)[:, 0], UNIFORM) for s in range(400)]
    frac = np.mean(np.array(vals) > gof.AD_CRITICAL["5%"])
    assert 0.02 <= frac <= 0.09
    assert np.mean(vals) == pytest.approx(1.0, abs=0.15)


def test_ad_empty():
    with pytest.raises(ValueError):
        gof.anderson_darling([], UNIFORM)


def test_fstar_examples():
    assert gof.f_star_discrepancy([0.5], UNIFORM) == pytest.approx(0.5, abs=1e-14)
    n = 64
    grid = (2 * np.arange(1, n + 1) - 1) / (2 * n)
    assert gof.f_star_discrepancy(grid, UNIFORM) == pytest.approx(1 / (2 * n))
    assert gof.f_star_discrepancy([1e-12], UNIFORM) == pytest.approx(1.0)
    assert gof.f_star_discrepancy([0.3], lambda x: np.asarray(x)) == pytest.approx(0.7)
    with pytest.raises(ValueError):
        gof.f_star_discrepancy([], UNIFORM)


@pytest.mark.parametrize("seed", range(20))
def test_fstar_matches_grid_sup(seed):
    rng = np.random.default_rng(seed)
    x = rng.beta(2, 5, size=rng.integers(1, 60))
    d = D.beta(2, 5)
    alpha = np.linspace(0, 1, 100_001)
    F = D.cdf(d, alpha)
    emp_closed = np.searchsorted(np.sort(x), alpha, side="right") / len(x)
    emp_open = np.searchsorted(np.sort(x), alpha, side="left") / len(x)
    grid_sup = max(np.max(np.abs(emp_closed - F)), np.max(np.abs(emp_open - F)))
    exact = gof.f_star_discrepancy(x, d)
    assert exact >= grid_sup - 1e-12
    assert exact - grid_sup <= 1e-5 * D.pdf(d, 0.2) + 1e-4


def test_star2d_examples():
    assert gof.star_discrepancy_2d([[0.5, 0.5]]) == pytest.approx(0.75)
    assert gof.star_discrepancy_2d([[1e-9, 1e-9]]) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("seed", range(8))
def test_star2d_vs_brute_force(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((int(rng.integers(1, 25)), 2))
    if seed % 2:
        pts = np.round(pts, 1) % 1.0 + 0.05  # ties in coordinates
    assert gof.star_discrepancy_2d(pts) == pytest.approx(brute_star_2d(pts), abs=1e-14)


def test_star2d_halton_beats_pseudorandom_median():
    n = 256
    h = gof.star_discrepancy_2d(PointStream(2, "halton").block(0, n))
    prs = [gof.star_discrepancy_2d(PointStream(2, "pseudorandom", s).block(0, n)) for s in range(10)]
    assert h < np.median(prs)


def test_star2d_guard():
    with pytest.raises(ValueError):
        gof.star_discrepancy_2d(np.full((gof.STAR_2D_MAX_POINTS + 1, 2), 0.5))
    with pytest.raises(ValueError):
        gof.star_discrepancy_2d(np.empty((0, 2)))


def test_partition_bound_zero_for_uniform_set():
    edges = np.linspace(0, 1, 11)
    pts = (edges[:-1] + edges[1:]) / 2  # one point per cell
    assert gof.partition_error_bound(pts, edges, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert gof.indicator_error(pts, 0.0, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_partition_bound_oscillation_term():
    edges = np.linspace(0, 1, 11)
    pts = (edges[:-1] + edges[1:]) / 2
    assert gof.partition_error_bound(pts, edges, 0.55) == pytest.approx(0.1)


def test_partition_bound_with_measure():
    d = D.gamma(2.0)
    edges = np.concatenate([[0.0], D.inverse_cdf(d, np.arange(1, 10) / 10), [np.inf]])
    pts = np.asarray(D.inverse_cdf(d, (np.arange(10) + 0.5) / 10))
    cdf = lambda t: np.asarray(D.cdf(d, np.minimum(t, 1e300)))  # noqa: E731
    b = gof.partition_error_bound(pts, edges, float(edges[3]), cdf)
    assert b == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("case", range(100))
def test_partition_bound_dominates(case):
    rng = np.random.default_rng(1000 + case)
    edges = np.concatenate([[0.0], np.sort(rng.uniform(0, 1, 9)), [1.0]])
    pts = rng.power(rng.uniform(0.5, 3), size=int(rng.integers(5, 500)))
    alpha = float(rng.uniform(0, 1))
    assert gof.indicator_error(pts, 0.0, alpha) <= gof.partition_error_bound(pts, edges, alpha) + 1e-14


def test_partition_bound_errors():
    with pytest.raises(ValueError):
        gof.partition_error_bound([0.5, 1.2], [0.0, 0.5, 1.0], 0.3)
    with pytest.raises(ValueError):
        gof.partition_error_bound([0.5], [0.0, 0.5, 0.4], 0.3)
    with pytest.raises(ValueError):
        gof.partition_error_bound([0.5], [0.0, 0.5, 1.0], 0.3, cdf_fn=lambda e: 0.5 * np.asarray(e))


def test_efficiency():
    assert gof.efficiency(0.3, 2.0, 0.3, 2.0) == 1.0
    assert gof.efficiency(2, 1, 1, 2) == 2
    # reference N=256 QMC entries: CR 2.7e-3, AR 1.5e-4 with efficiencies 57 and 7233
    ratio_t = (7233 / 57) / (2.7e-3 / 1.5e-4) ** 2
    assert gof.efficiency(2.7e-3, 1.0, 1.5e-4, 1.0 / ratio_t) == pytest.approx(7233 / 57)
    for bad in [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)]:
        with pytest.raises(ValueError):
            gof.efficiency(*bad)


@given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3))
def test_efficiency_identity(s, t):
    assert gof.efficiency(s, t, s, t) == 1.0


def test_timed_median():
    calls = []

    def fn():
        calls.append(1)
        return len(calls)

    out, t = gof.timed(fn, 5)
    assert out == 1 and len(calls) == 5 and t >= 0


def test_report():
    r = gof.GofReport("anderson_darling", 2.0, 10)
    assert r.passes("5%") and not r.passes("10%")
    assert r.to_dict()["reference_points"] == {"5%": 2.49, "10%": 1.93}
