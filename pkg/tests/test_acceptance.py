"""Acceptance gate. Every check records a PASS/FAIL line shown in the terminal summary.

Multi-engine criteria are split per engine so that one engine's miss does not hide
the others' results.
"""

import math
import time
import timeit

import numpy as np
import pytest

from fourier_greeks.diagnostics import Flag, check_conditions, estimate_decay
from fourier_greeks.distributions import MEParams, RngStream, me_cdf, me_quantile
from fourier_greeks.fdgreeks import fd_delta, fd_gamma
from fourier_greeks.fourier import Payoff, cm_value, cos_value, lewis_value, make_pricer
from fourier_greeks.models import MarketSetup, ModelSpec, me_digital_delta, me_digital_gamma, me_digital_price, model_cf
from fourier_greeks.quadrature import SimpsonGrid, laguerre_integrate, laguerre_rule, simpson_integrate
from fourier_greeks.risk import VaRConfig, delta_gamma_var, full_mc_var, simulate_scenarios

FOURIER = ("cos", "cm", "lewis")
SEED = 42
PATHS = 100_000


# --------------------------------------------------------------------------- AC1

def test_ac1_closed_form(me_model, me_market, acceptance):
    vals = (me_digital_price(me_model, me_market), me_digital_delta(me_model, me_market), me_digital_gamma(me_model, me_market))
    ok = tuple(round(float(v), 2) for v in vals) == (0.45, -2.10, 12.47)
    acceptance("AC1 closed-form values", ok, "price/delta/gamma = " + " / ".join(f"{v:.4f}" for v in vals))


def test_ac1_runtime(me_model, me_market, acceptance):
    calls = lambda: (me_digital_price(me_model, me_market), me_digital_delta(me_model, me_market), me_digital_gamma(me_model, me_market))
    per_call = min(timeit.repeat(calls, number=100, repeat=5)) / 100
    acceptance("AC1 runtime < 1 ms", per_call < 1e-3, f"{per_call * 1e6:.1f} us for all three")


# --------------------------------------------------------------------------- AC2

@pytest.fixture(scope="module")
def me_cm_pricer(me_model, me_market):
    return make_pricer("cm", me_model, me_market, Payoff.DIGITAL_PUT)


@pytest.mark.parametrize("h,gamma", [(0.01, 12.47), (0.02, 12.55), (0.005, 12.46)])
def test_ac2_finite_differences(me_cm_pricer, h, gamma, acceptance):
    d, g = fd_delta(me_cm_pricer, 0.75, h), fd_gamma(me_cm_pricer, 0.75, h)
    ok = abs(d - (-2.10)) <= 0.005 and abs(g - gamma) <= 0.02
    acceptance(f"AC2 FD h={h}", ok, f"delta {d:.4f} (want -2.10), gamma {g:.4f} (want {gamma} +- 0.02)")


# --------------------------------------------------------------------------- AC3

@pytest.mark.parametrize("engine", FOURIER)
def test_ac3_digital_price_band(me_digital_reports, engine, acceptance):
    p = me_digital_reports[engine].price
    acceptance(f"AC3 ME digital price {engine}", 0.445 <= p <= 0.465, f"{p:.5f} in [0.445, 0.465]")


@pytest.mark.parametrize("model", ["me", "vg"])
def test_ac3_call_agreement(me_model, vg_model, me_market, vg_market, model, acceptance):
    m, mk = (me_model, me_market) if model == "me" else (vg_model, vg_market)
    prices = [cm_value(m, mk, Payoff.CALL), cos_value(m, mk, Payoff.CALL), lewis_value(m, mk, Payoff.CALL)]
    spread = max(prices) - min(prices)
    acceptance(f"AC3 {model.upper()} call agreement", spread <= 5e-3, f"cm/cos/lewis = {prices[0]:.6f}/{prices[1]:.6f}/{prices[2]:.6f}, spread {spread:.2e}")


# --------------------------------------------------------------------------- AC4

@pytest.mark.parametrize("engine,target,tol", [("cos", -2.09, 0.02), ("cm", -2.09, 0.02), ("lewis", -2.01, 0.05)])
def test_ac4_me_delta(me_digital_reports, engine, target, tol, acceptance):
    d = me_digital_reports[engine].delta
    acceptance(f"AC4 ME delta {engine}", abs(d - target) <= tol, f"{d:.4f} (want {target} +- {tol})")


# --------------------------------------------------------------------------- AC5

@pytest.mark.parametrize("engine,target", [("cos", 36.98), ("cm", 29.01), ("lewis", 38.54)])
def test_ac5_me_gamma_failure(me_digital_reports, engine, target, acceptance):
    g = me_digital_reports[engine].gamma
    ok = g > 25 and abs(g - target) <= 0.2 * target
    acceptance(f"AC5 ME gamma {engine}", ok, f"{g:.3f} (want > 25 and {target} +- 20%)")


# --------------------------------------------------------------------------- AC6

@pytest.fixture(scope="module")
def vg_cm_pricer(vg_model, vg_market):
    return make_pricer("cm", vg_model, vg_market, Payoff.DIGITAL_PUT)


def test_ac6_vg_fd(vg_cm_pricer, acceptance):
    d, g = fd_delta(vg_cm_pricer, 0.65, 0.01), fd_gamma(vg_cm_pricer, 0.65, 0.01)
    ok = abs(g - (-6.45)) <= 0.5 and abs(d - (-0.21)) <= 0.02
    acceptance("AC6 VG FD h=0.01", ok, f"delta {d:.4f} (want -0.21 +- 0.02), gamma {g:.3f} (want -6.45 +- 0.5)")


@pytest.mark.parametrize("engine,floor", [("cos", 100), ("cm", 100), ("lewis", 50)])
def test_ac6_vg_fourier(vg_digital_reports, engine, floor, acceptance):
    r = vg_digital_reports[engine]
    ok = r.gamma > floor and r.delta > 0
    acceptance(f"AC6 VG {engine}", ok, f"gamma {r.gamma:.2f} (want > {floor}), delta {r.delta:.4f} (want > 0, wrong sign)")


# --------------------------------------------------------------------------- AC7

def test_ac7_decay(me_model, vg_model, acceptance):
    p_me, p_vg = estimate_decay(me_model).exponent, estimate_decay(vg_model).exponent
    flags = []
    for m, p in ((me_model, p_me), (vg_model, p_vg)):
        est = estimate_decay(m)
        rep = check_conditions(m, Payoff.DIGITAL_PUT, est)
        flags.append(all(rep.flag(e, 2) is Flag.VIOLATED for e in FOURIER))
    ok = abs(p_me - 1.0) <= 0.05 and abs(p_vg - 0.417) <= 0.02 and all(flags)
    acceptance("AC7 decay diagnostics", ok, f"p_ME {p_me:.4f}, p_VG {p_vg:.4f}, digital gamma violated {flags}")


# --------------------------------------------------------------------------- AC8

@pytest.fixture(scope="module")
def var_runs(me_model, vg_model, me_market, vg_market, me_digital_reports, vg_digital_reports):
    """Full-MC and Delta-Gamma VaR for both models on one scenario set each."""
    t0 = time.perf_counter()
    cfg = VaRConfig(paths=PATHS, rng=RngStream(SEED))
    out = {}
    for name, m, mk, reps, mc in (
        ("me", me_model, me_market, me_digital_reports, "analytic"),
        ("vg", vg_model, vg_market, vg_digital_reports, "cos"),
    ):
        sc = simulate_scenarios(m, mk.s0, cfg)
        base = make_pricer("cm", m, mk, Payoff.DIGITAL_PUT)
        fd = (fd_delta(base, mk.s0, 0.01), fd_gamma(base, mk.s0, 0.01))
        res = {"full": full_mc_var(m, mk, Payoff.DIGITAL_PUT, make_pricer(mc, m, mk, Payoff.DIGITAL_PUT), cfg, scenarios=sc).var}
        res["fd"] = delta_gamma_var(*fd, m, mk.s0, cfg, scenarios=sc).var
        for e in FOURIER:
            res[e] = delta_gamma_var(reps[e].delta, reps[e].gamma, m, mk.s0, cfg, scenarios=sc).var
        out[name] = res
    out["seconds"] = time.perf_counter() - t0
    return out


def test_ac8_runtime(var_runs, acceptance):
    acceptance("AC8 runtime < 2 min", var_runs["seconds"] < 120, f"{var_runs['seconds']:.1f} s for both models, N={PATHS}")


@pytest.mark.parametrize("model,anchor", [("me", 0.18), ("vg", 2.1e-3)])
def test_ac8_full_mc_anchor(var_runs, model, anchor, acceptance):
    v = var_runs[model]["full"]
    acceptance(f"AC8 {model.upper()} full-MC anchor", abs(v - anchor) <= 0.3 * anchor, f"{v:.4g} (want {anchor} +- 30%)")


@pytest.mark.parametrize("model", ["me", "vg"])
def test_ac8_fd_tracks_full_mc(var_runs, model, acceptance):
    r = var_runs[model]
    rel = abs(r["fd"] - r["full"]) / r["full"]
    acceptance(f"AC8 {model.upper()} delta-gamma FD vs full-MC", rel <= 0.35, f"{r['fd']:.4g} vs {r['full']:.4g} ({rel:.0%} apart, want <= 35%)")


@pytest.mark.parametrize("model,factor", [("me", 2), ("vg", 10)])
@pytest.mark.parametrize("engine", FOURIER)
def test_ac8_fourier_underestimates(var_runs, model, factor, engine, acceptance):
    r = var_runs[model]
    ratio = r["full"] / r[engine] if r[engine] > 0 else math.inf
    acceptance(
        f"AC8 {model.upper()} delta-gamma {engine} underestimate",
        ratio >= factor,
        f"full-MC/delta-gamma = {r['full']:.4g}/{r[engine]:.4g} = {ratio:.3g} (want >= {factor})",
    )


# --------------------------------------------------------------------------- AC9

def test_ac9_martingale(acceptance):
    models = [ModelSpec.me(e, l, t, r) for e, l, t, r in ((1, 2, 1 / 12, 0), (0.5, 4, 0.5, 0.03), (3, 1.5, 1, -0.01))]
    models += [ModelSpec.vg(s, n, th, t, r) for s, n, th, t, r in ((0.13, 0.4, 0, 1 / 12, 0), (0.3, 0.2, -0.1, 1, 0.05))]
    err = max(abs(model_cf(m, -1j) - math.exp(m.rate * m.maturity)) for m in models)
    acceptance("AC9 martingale identity", err <= 1e-12, f"max |phi(-i) - e^rT| = {err:.1e}")


def test_ac9_quantile_roundtrip(acceptance):
    y = np.linspace(1e-6, 1 - 1e-6, 10_001)
    err = max(np.max(np.abs(me_cdf(p, me_quantile(p, y)) - y)) for p in (MEParams(0, 1, 2), MEParams(-1, 7, 0.3), MEParams(2, 3.46, 6.93)))
    acceptance("AC9 quantile/cdf roundtrip", err <= 1e-12, f"max error {err:.1e}")


def test_ac9_laguerre_factorials(acceptance):
    rule = laguerre_rule(2000)
    err = max(abs(laguerre_integrate(rule, lambda x: x**k * np.exp(-x)) / math.factorial(k) - 1) for k in range(31))
    acceptance("AC9 Gauss-Laguerre k! exactness", err <= 1e-9, f"max relative error {err:.1e} for k <= 30")


def test_ac9_simpson_cubic(acceptance):
    grid = SimpsonGrid(2.5, 11)
    got = simpson_integrate(grid, lambda x: 1 - 2 * x + 3 * x**2 - 0.5 * x**3)
    exact = 2.5 - 2.5**2 + 2.5**3 - 0.125 * 2.5**4
    acceptance("AC9 Simpson cubic exactness", abs(got - exact) <= 1e-12, f"error {abs(got - exact):.1e}")


def test_ac9_fd_convergence(me_model, acceptance):
    mk = MarketSetup(0.80, 0.75)
    price = make_pricer("analytic", me_model, mk, Payoff.DIGITAL_PUT)
    exact = me_digital_delta(me_model, mk)
    e = [abs(fd_delta(price, 0.80, h) - exact) for h in (0.02, 0.01, 0.005)]
    ratios = (e[0] / e[1], e[1] / e[2])
    acceptance("AC9 FD second-order convergence", all(abs(r - 4) <= 0.5 for r in ratios), f"error ratios {ratios[0]:.3f}, {ratios[1]:.3f}")


def test_ac9_seed_determinism(vg_model, acceptance):
    cfg = VaRConfig(paths=50_000, rng=RngStream(SEED))
    a = simulate_scenarios(vg_model, 0.65, cfg).prices
    b = simulate_scenarios(vg_model, 0.65, cfg).prices
    acceptance("AC9 seed determinism", a.tobytes() == b.tobytes(), "two runs with the same seed are bitwise equal")
