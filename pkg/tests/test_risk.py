import numpy as np
import pytest
from hypothesis import given, strategies as st

from fourier_greeks.distributions import RngStream
from fourier_greeks.errors import ParameterError, ScenarioPricingError
from fourier_greeks.fourier import Payoff, make_pricer
from fourier_greeks.models import ModelSpec, mean_correction, me_digital_delta, me_digital_gamma
from fourier_greeks.risk import (
    BLOCK_SIZE,
    VaRConfig,
    delta_gamma_var,
    empirical_var,
    full_mc_var,
    simulate_scenarios,
)


def _log_increments(model, s0, cfg):
    sc = simulate_scenarios(model, s0, cfg)
    hm = model.at_horizon(cfg.horizon)
    return np.log(sc.prices / s0) - hm.rate * hm.maturity - mean_correction(hm)


def test_empirical_var_examples():
    assert empirical_var(np.arange(-3, 97), 0.01) == 3
    assert empirical_var(np.tile([-1.0, 1.0], 50), 0.5) == 1
    assert empirical_var(np.linspace(0, 1, 100), 0.01) <= 0
    with pytest.raises(ParameterError):
        empirical_var([], 0.01)


@given(pnl=st.lists(st.floats(-1e6, 1e6), min_size=100, max_size=300), p1=st.floats(0.01, 0.5), p2=st.floats(0.01, 0.5))
def test_var_non_increasing_in_level(pnl, p1, p2):
    lo, hi = sorted((p1, p2))
    assert empirical_var(pnl, lo) >= empirical_var(pnl, hi)


def test_config_requires_index():
    with pytest.raises(ParameterError):
        VaRConfig(level=0.01, paths=50)
    VaRConfig(level=0.01, paths=100)
    with pytest.raises(ParameterError):
        VaRConfig(horizon=0.0)


@pytest.mark.slow
def test_vg_scenario_moments(vg_model):
    cfg = VaRConfig(paths=1_000_000, rng=RngStream(5))
    x = _log_increments(vg_model, 0.65, cfg)
    t = cfg.horizon
    var = 0.13**2 * t
    assert abs(x.mean()) < 3 * np.sqrt(var / x.size)
    # Var of the sample variance is (kurtosis - 1) * var^2 / n, VG kurtosis is 3(1 + nu/t)
    kurt = 3 * (1 + 0.4 / t)
    assert abs(x.var() - var) < 3 * np.sqrt((kurt - 1) / x.size) * var


def test_me_scenario_median(me_model):
    x = _log_increments(me_model, 0.75, VaRConfig(paths=200_000, rng=RngStream(9)))
    assert np.mean(x <= 0) == pytest.approx(0.5, abs=0.002)


def test_scenarios_deterministic_and_block_consistent(vg_model):
    a = simulate_scenarios(vg_model, 0.65, VaRConfig(paths=100_000, rng=RngStream(3)))
    b = simulate_scenarios(vg_model, 0.65, VaRConfig(paths=100_000, rng=RngStream(3)))
    c = simulate_scenarios(vg_model, 0.65, VaRConfig(paths=BLOCK_SIZE, rng=RngStream(3)))
    assert a.prices.tobytes() == b.prices.tobytes()
    assert np.array_equal(a.prices[:BLOCK_SIZE], c.prices)
    assert a.meta["seed"] == 3 and "Philox" in a.meta["generator"]


def test_horizon_must_respect_me_strip():
    m = ModelSpec.me(1.0, 2.0, 1 / 12)
    with pytest.raises(ParameterError):
        simulate_scenarios(m, 0.75, VaRConfig(horizon=5.0))


def test_tiny_horizon_gives_zero_var(me_model, me_market):
    cfg = VaRConfig(horizon=1e-12, paths=1000, rng=RngStream(1))
    pricer = make_pricer("analytic", me_model, me_market, Payoff.DIGITAL_PUT)
    assert abs(full_mc_var(me_model, me_market, Payoff.DIGITAL_PUT, pricer, cfg).var) < 1e-4


def test_linear_case_is_scenario_quantile(me_model):
    cfg = VaRConfig(paths=10_000, rng=RngStream(2))
    sc = simulate_scenarios(me_model, 0.75, cfg)
    res = delta_gamma_var(-2.0, 0.0, me_model, 0.75, cfg, scenarios=sc)
    k = int(np.ceil(0.01 * 10_000))
    q = np.sort(sc.prices)[::-1][k - 1]
    assert res.var == pytest.approx(2.0 * (q - 0.75), rel=1e-12)


def test_scenario_failure_reports_index(me_model, me_market):
    cfg = VaRConfig(paths=1000, rng=RngStream(4))
    sc = simulate_scenarios(me_model, 0.75, cfg)
    bad_at = int(np.argmax(sc.prices))

    def pricer(s):
        s = np.asarray(s, dtype=float)
        return np.where(s == sc.prices[bad_at], np.nan, 0.5)

    with pytest.raises(ScenarioPricingError) as exc:
        full_mc_var(me_model, me_market, Payoff.DIGITAL_PUT, pricer, cfg, scenarios=sc)
    assert exc.value.index == bad_at


def test_scalar_pricer_accepted(me_model, me_market):
    cfg = VaRConfig(paths=500, rng=RngStream(4))
    vec = make_pricer("analytic", me_model, me_market, Payoff.DIGITAL_PUT)
    scalar = lambda s: float(vec(float(s)))
    a = full_mc_var(me_model, me_market, Payoff.DIGITAL_PUT, vec, cfg).var
    b = full_mc_var(me_model, me_market, Payoff.DIGITAL_PUT, scalar, cfg).var
    assert a == b


def test_delta_gamma_tracks_full_mc_in_me(me_model, me_market):
    cfg = VaRConfig(paths=100_000, rng=RngStream(8))
    sc = simulate_scenarios(me_model, 0.75, cfg)
    pricer = make_pricer("analytic", me_model, me_market, Payoff.DIGITAL_PUT)
    full = full_mc_var(me_model, me_market, Payoff.DIGITAL_PUT, pricer, cfg, scenarios=sc).var
    dg = delta_gamma_var(me_digital_delta(me_model, me_market), me_digital_gamma(me_model, me_market), me_model, 0.75, cfg, scenarios=sc).var
    assert abs(dg - full) / full < 0.35
    # same seed, same scenarios, same answer
    assert dg == delta_gamma_var(me_digital_delta(me_model, me_market), me_digital_gamma(me_model, me_market), me_model, 0.75, cfg).var
