import math

import numpy as np
import pytest

from qmcar import vg
from qmcar.lds import PointStream
from qmcar.samplers import gamma_route

PARAMS = vg.VGParams()


def option(T=1.0, **kw):
    return vg.OptionSpec(maturity=T, **kw)


def test_omega_value():
    arg = 1 + 0.1436 * 0.3 - 0.5 * 0.12136**2 * 0.3
    assert arg == pytest.approx(1.040866, abs=1e-5)  # quoted to six places from rounded inputs
    assert PARAMS.omega == pytest.approx(math.log(arg) / 0.3, rel=1e-15)
    assert PARAMS.omega == pytest.approx(0.13351, abs=2e-5)


def test_short_maturity_shape_routed_to_gs():
    shape = vg.gamma_shape(PARAMS, option(0.25))
    assert shape == pytest.approx(0.8333333333333334, rel=1e-15)
    assert gamma_route(shape)[0] == "gamma_gs"
    assert vg.method_dims("ar_qmc", shape) == 4
    assert vg.method_dims("ar_qmc", vg.gamma_shape(PARAMS, option(0.5))) == 3
    assert vg.method_dims("inverse_qmc", shape) == 2


def test_martingale_error():
    with pytest.raises(vg.MartingaleError):
        vg.VGParams(theta=4.0, sigma=0.1, nu=0.3).omega
    with pytest.raises(vg.MartingaleError):
        vg.price_european_call(vg.VGParams(theta=4.0, sigma=0.1, nu=0.3), option(), "ar_mc", 10, 2)
    with pytest.raises(ValueError):
        vg.VGParams(sigma=0.0)
    with pytest.raises(ValueError):
        vg.OptionSpec(maturity=0.0)


@pytest.mark.parametrize("T", vg.TABLE5_MATURITIES)
def test_martingale_mc(T):
    # mean of discounted S_T equals spot within 3 standard errors
    opt = option(T)
    n = 1_000_000
    pts = PointStream(1, "pseudorandom", 11).block(0, n)[:, 0]
    s = vg.vg_terminal(PARAMS, opt, pts, PointStream(gamma_route(T / PARAMS.nu)[1], "pseudorandom", 12))
    disc = math.exp(-opt.rate * T) * s
    se = disc.std(ddof=1) / math.sqrt(n)
    assert abs(disc.mean() - opt.spot) <= 3 * se


def test_vg_terminal_scalar_and_array():
    opt = option()
    s = vg.vg_terminal(PARAMS, opt, 0.5, np.array([0.3]))
    expect = 100 * math.exp((0.1 + PARAMS.omega) + PARAMS.theta * 0.3)
    assert isinstance(s, float) and s == pytest.approx(expect, rel=1e-12)


def test_degenerate_diffusion_limit():
    p = vg.VGParams(theta=0.0, sigma=1e-9, nu=0.3)
    opt = option(0.5)
    s = vg.vg_terminal(p, opt, np.full(1000, 0.9), PointStream(2, "pseudorandom", 1))
    assert np.allclose(s, 100 * math.exp(0.1 * 0.5), rtol=1e-7)


def test_zero_strike_limit():
    opt = option(1.0, strike=0.0)
    rep = vg.price_european_call(PARAMS, opt, "ar_mc", paths=100_000, reps=20, seed=3)
    se = rep.std_dev / math.sqrt(rep.reps)
    assert abs(rep.price - 100.0) <= 3 * se + 1e-12


@pytest.mark.parametrize("T,price", sorted(vg.TABLE5_EXACT.items()))
def test_exact_price_to_the_cent(T, price):
    assert round(vg.exact_call_price(PARAMS, option(T)), 2) == price


def test_exact_price_zero_strike():
    assert vg.exact_call_price(PARAMS, option(0.5, strike=0.0)) == pytest.approx(100.0, rel=1e-9)


@pytest.fixture(scope="module")
def reports():
    out = {}
    for T in vg.TABLE5_MATURITIES:
        for m in vg.METHODS:
            out[T, m] = vg.price_european_call(PARAMS, option(T), m, paths=10_000, reps=20, seed=5)
    return out


@pytest.mark.parametrize("T", vg.TABLE5_MATURITIES)
def test_methods_agree(reports, T):
    reps = [reports[T, m] for m in vg.METHODS]
    for a in reps:
        for b in reps:
            se = math.sqrt(a.std_dev**2 / a.reps + b.std_dev**2 / b.reps)
            assert abs(a.price - b.price) <= 3 * se + 1e-12


@pytest.mark.parametrize("T", vg.TABLE5_MATURITIES)
def test_qmc_variance_reduction(reports, T):
    assert reports[T, "ar_qmc"].std_dev < reports[T, "ar_mc"].std_dev
    assert reports[T, "inverse_qmc"].std_dev < reports[T, "inverse_mc"].std_dev


def test_report_fields(reports):
    r = reports[0.25, "ar_qmc"]
    d = r.to_dict()
    assert "estimates" not in d and d["std_dev"] >= 0
    assert d["meta"]["gamma_route"] == "gamma_gs" and d["meta"]["dims"] == 4
    assert "rejection_policy" in d["meta"]
    assert len(r.estimates) == 20


def test_price_reproducible():
    a = vg.price_european_call(PARAMS, option(0.5), "ar_qmc", paths=500, reps=3, seed=9)
    b = vg.price_european_call(PARAMS, option(0.5), "ar_qmc", paths=500, reps=3, seed=9)
    assert a.estimates == b.estimates


def test_workers_match_serial():
    a = vg.price_european_call(PARAMS, option(0.75), "inverse_qmc", paths=500, reps=4, seed=2)
    b = vg.price_european_call(PARAMS, option(0.75), "inverse_qmc", paths=500, reps=4, seed=2, workers=2)
    assert a.estimates == b.estimates and b.workers == 2


def test_price_errors():
    with pytest.raises(ValueError):
        vg.price_european_call(PARAMS, option(), "bridge", 10, 2)
    with pytest.raises(ValueError):
        vg.price_european_call(PARAMS, option(), "ar_mc", 0, 2)
