import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from qmcar import distributions as D
from qmcar import samplers as S
from qmcar.gof import anderson_darling
from qmcar.lds import PointStream

BETA_SETS = [(a, b) for a in (0.3, 0.5, 0.7) for b in (0.3, 0.5, 0.7)]
GAMMA_SETS = [1.6, 2.0, 2.4, 2.8, 3.2, 0.2, 0.4, 0.6, 0.8]
N = 100_000


def qmc(dims, seed=11):
    return PointStream(dims, "random_start_halton", seed)


def mc(dims, seed=11):
    return PointStream(dims, "pseudorandom", seed)


def gamma_stream(alpha, kind="random_start_halton", seed=11):
    return PointStream(S.gamma_route(alpha)[1], kind, seed)


def test_aw_constants_symmetric():
    assert S.aw_constants(0.5, 0.5) == pytest.approx((0.5, 0.5))


def test_aw_hand_trace():
    x, ok = S.aw_trial(0.5, 0.5)(np.array([[math.exp(-1), 0.25]]))
    assert x[0] == pytest.approx(0.125)
    assert ok[0]


def test_ch_constants():
    a, b, c = S.ch_constants(2.0)
    assert (a, b, c) == pytest.approx((3 ** -0.5, 2 - math.log(4), 2 + math.sqrt(3)))
    assert S.CHENG_D == pytest.approx(1 + math.log(4.5), abs=1e-7)


def test_ch_midpoint():
    # u = 0.5 gives Y = 0, X = alpha, and Z = v / 4
    x, ok = S.ch_trial(2.0)(np.array([[0.5, 0.2]]))
    assert x[0] == pytest.approx(2.0)
    r = S.ch_constants(2.0)[1]
    assert ok[0] == ((r + S.CHENG_D - 4.5 * 0.05 >= 0) or (r >= math.log(0.05)))


def test_gs_constant_and_hand_trace():
    assert S.gs_constant(0.5) == pytest.approx(1.18394, abs=1e-5)
    x, ok = S.gs_trial(0.5)(np.array([[0.5, math.exp(-1), 0.5]]))
    assert x[0] == pytest.approx(0.35043, abs=1e-5)
    assert ok[0]


def test_exponential_route():
    class One:
        dims = 1
        next_index = 0

        def block(self, start, count):
            return np.full((count, 1), 1 - math.exp(-1))

        def config(self):
            return {}

    rec = S.gamma_sample(1.0, 1.0, One(), 1)
    assert rec.accepted[0] == pytest.approx(1.0)
    assert S.gamma_route(1.0) == ("exponential", 1)
    assert S.gamma_route(0.5) == ("gamma_gs", 3)
    assert S.gamma_route(2.0) == ("gamma_ch", 2)
    with pytest.raises(ValueError):
        S.gamma_route(0.0)


def test_gamma_scaled_mean():
    rec = S.gamma_sample(2.0, 0.3, gamma_stream(2.0), N)
    assert rec.accepted.mean() == pytest.approx(0.6, abs=0.01)


@pytest.mark.parametrize("a,b", BETA_SETS)
def test_beta_qmc_fit(a, b):
    rec = S.beta_aw(a, b, qmc(2), count=N)
    assert len(rec.accepted) == N
    assert np.all((rec.accepted > 0) & (rec.accepted < 1))
    assert anderson_darling(rec.accepted, D.beta(a, b)) < 1.93


@pytest.mark.parametrize("alpha", GAMMA_SETS + [0.25 / 0.3])
def test_gamma_qmc_fit(alpha):
    rec = S.gamma_sample(alpha, 1.0, gamma_stream(alpha), N)
    assert np.all(rec.accepted > 0)
    assert anderson_darling(rec.accepted, D.gamma(alpha)) < 1.93


def _se_check(x, mean, var):
    n = len(x)
    assert abs(x.mean() - mean) <= 3 * math.sqrt(var / n)


@pytest.mark.parametrize("a,b", BETA_SETS)
def test_beta_mc_moments(a, b):
    x = S.beta_aw(a, b, mc(2), count=N).accepted
    d = D.beta(a, b)
    _se_check(x, d.mean, d.variance)


@pytest.mark.parametrize("alpha", GAMMA_SETS)
def test_gamma_mc_moments(alpha):
    x = S.gamma_sample(alpha, 1.0, gamma_stream(alpha, "pseudorandom"), N).accepted
    _se_check(x, alpha, alpha)
    # variance: the sample variance has variance (mu4 - sigma^4)/n, mu4 = 3a(a+2) for unit scale
    se_var = math.sqrt((3 * alpha * (alpha + 2) - alpha**2) / N)
    assert abs(x.var(ddof=1) - alpha) <= 3 * se_var


@pytest.mark.parametrize("a,b", BETA_SETS)
def test_beta_mc_qmc_agree(a, b):
    x = S.beta_aw(a, b, mc(2, 5), count=N).accepted
    y = S.beta_aw(a, b, qmc(2, 5), count=N).accepted
    se = math.sqrt(x.var() / N + y.var() / N)
    assert abs(x.mean() - y.mean()) < 3 * se


@pytest.mark.parametrize("alpha", GAMMA_SETS)
def test_gamma_mc_qmc_agree(alpha):
    x = S.gamma_sample(alpha, 1.0, gamma_stream(alpha, "pseudorandom", 5), N).accepted
    y = S.gamma_sample(alpha, 1.0, gamma_stream(alpha, "random_start_halton", 5), N).accepted
    se = math.sqrt(x.var() / N + y.var() / N)
    assert abs(x.mean() - y.mean()) < 3 * se


def test_determinism():
    a = S.gamma_gs(0.4, qmc(3, 9), count=5000).accepted
    b = S.gamma_gs(0.4, qmc(3, 9), count=5000).accepted
    np.testing.assert_array_equal(a, b)


def test_candidates_mode():
    rec = S.gamma_ch(2.4, mc(2), candidates=1000)
    assert rec.candidates_consumed == 1000
    assert 0 < len(rec.accepted) <= 1000
    with pytest.raises(ValueError):
        S.gamma_ch(2.4, mc(2))
    with pytest.raises(ValueError):
        S.gamma_ch(2.4, mc(2), count=5, candidates=5)


@pytest.mark.parametrize("call", [
    lambda: S.beta_aw(1.2, 0.5, qmc(2), count=1),
    lambda: S.beta_aw(0.5, 0.5, qmc(3), count=1),
    lambda: S.gamma_ch(0.9, qmc(2), count=1),
    lambda: S.gamma_gs(1.5, qmc(3), count=1),
    lambda: S.gamma_gs(0.5, qmc(2), count=1),
    lambda: S.gamma_sample(2.0, 0.0, qmc(2), 1),
])
def test_domain_checks(call):
    with pytest.raises(ValueError):
        call()


def test_acceptance_ratio_matches_envelope_area():
    # GS* acceptance probability is Gamma(a + 1) / b with b = (a + e) / e
    alpha = 0.6
    rec = S.gamma_gs(alpha, mc(3), candidates=400_000)
    expected = math.gamma(alpha + 1) / S.gs_constant(alpha)
    assert rec.acceptance_ratio == pytest.approx(expected, abs=0.005)


def _reversed_gs_tail(alpha, points):
    # tail test exactly as listed: accept when w**(1/(a-1)) <= x
    b = S.gs_constant(alpha)
    u, v, w = points.T
    y = b * u
    head = y <= 1
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(head, y ** (1 / alpha), -np.log((b - y) / alpha))
        ok = np.where(head, -np.log(v) >= x, w ** (1 / (alpha - 1)) <= x)
    return x[ok]


def test_reversed_gs_tail_comparison_is_biased():
    pts = mc(3, 1).block(0, 200_000)
    wrong = _reversed_gs_tail(0.6, pts)
    right = S.gs_trial(0.6)(pts)
    right = right[0][right[1]]
    assert stats.kstest(wrong, stats.gamma(0.6).cdf).pvalue < 1e-6
    assert stats.kstest(right, stats.gamma(0.6).cdf).pvalue > 1e-3


def test_aw_right_branch_with_first_uniform_is_biased():
    # listing uses u in the right-branch proposal; u also drives Y, coupling the two
    a, b = 0.5, 0.3
    t, p = S.aw_constants(a, b)
    pts = mc(2, 1).block(0, 200_000)
    u, v = pts.T
    y = -np.log(u)
    left = v <= p
    x = np.where(left, t * (v / p) ** (1 / a), 1 - (1 - t) * ((1 - u) / (1 - p)) ** (1 / b))
    with np.errstate(invalid="ignore", divide="ignore"):
        ok_l = (y >= (1 - b) * (t - x) / (1 - t)) | (y >= (1 - b) * np.log((1 - x) / (1 - t)))
        ok_r = (y >= (1 - a) * (x / t - 1)) | (y >= (1 - a) * np.log(x / t))
    wrong = x[np.where(left, ok_l, ok_r) & (x > 0) & (x < 1)]
    right = S.beta_aw(a, b, mc(2, 1), candidates=200_000).accepted
    assert stats.kstest(wrong, stats.beta(a, b).cdf).pvalue < 1e-6
    assert stats.kstest(right, stats.beta(a, b).cdf).pvalue > 1e-3


@given(st.floats(1.01, 20.0))
@settings(max_examples=15, deadline=None)
def test_ch_any_shape_accepts_positive(alpha):
    rec = S.gamma_ch(alpha, qmc(2, 3), count=2000)
    assert np.all(rec.accepted > 0)
    assert 0.5 < rec.acceptance_ratio <= 1


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
@settings(max_examples=15, deadline=None)
def test_aw_any_shape_in_unit_interval(a, b):
    rec = S.beta_aw(a, b, qmc(2, 3), count=2000)
    assert np.all((rec.accepted > 0) & (rec.accepted < 1))


def test_sampler_config():
    cfg = S.SamplerConfig("gamma_gs", 0.4, scale=2.0, count=100)
    assert cfg.dims == 3
    rec = cfg.run(qmc(3))
    assert len(rec.accepted) == 100
    ref = S.gamma_gs(0.4, qmc(3), count=100).accepted * 2.0
    np.testing.assert_array_equal(rec.accepted, ref)
    assert S.SamplerConfig("beta_aw", 0.5, 0.5).dims == 2
    for bad in (dict(family="beta_aw", alpha=0.5), dict(family="gamma_ch", alpha=0.5),
                dict(family="gamma_gs", alpha=2.0), dict(family="nope", alpha=1.0),
                dict(family="gamma_ch", alpha=2.0, count=0)):
        with pytest.raises(ValueError):
            S.SamplerConfig(**bad)


def test_record_meta():
    rec = S.gamma_sample(0.8, 0.3, qmc(3), 10)
    assert rec.meta["sampler"] == "gamma_gs"
    assert rec.meta["stream"]["kind"] == "random_start_halton"
