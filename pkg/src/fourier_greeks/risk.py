"""One-day VaR of a single option position: full Monte Carlo and Delta-Gamma.

Scenarios are drawn under the pricing measure (no physical drift). Paths are
generated in fixed-size blocks, each from its own substream, so results do not
depend on how the work is chunked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .distributions import GENERATOR_ID, GammaParams, RngStream, gamma_sample, me_sample
from .errors import ParameterError, ScenarioPricingError
from .models import MarketSetup, ModelSpec, mean_correction

BLOCK_SIZE = 65_536
DAYS_PER_YEAR = 250


@dataclass(frozen=True)
class VaRConfig:
    level: float = 0.01
    horizon: float = 1.0 / DAYS_PER_YEAR
    paths: int = 100_000
    rng: RngStream = RngStream(seed=0)

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ParameterError(f"VaR level must lie in (0, 1), got {self.level}")
        if not self.horizon > 0:
            raise ParameterError(f"horizon must be positive, got {self.horizon}")
        if self.paths < 1 or round(self.level * self.paths, 9) < 1:
            raise ParameterError(f"level * paths must be at least 1 (level={self.level}, paths={self.paths})")


@dataclass(frozen=True)
class ScenarioSet:
    prices: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(self.prices > 0):
            raise ParameterError("simulated prices must be strictly positive")


@dataclass(frozen=True)
class VaRResult:
    var: float
    approach: str
    source: str
    level: float
    paths: int
    meta: dict = field(default_factory=dict)


def _order_index(p, n):
    # round first so that e.g. 0.01 * 100 does not ceil to 2
    return math.ceil(round(p * n, 9))


def simulate_scenarios(model: ModelSpec, s0: float, cfg: VaRConfig) -> ScenarioSet:
    """Spot prices at the horizon, S_t = s0 * exp(r t + m_t + X_t)."""
    if not s0 > 0:
        raise ParameterError("spot must be positive")
    hm = model.at_horizon(cfg.horizon)
    drift = hm.rate * hm.maturity + mean_correction(hm)
    chunks = []
    for j, lo in enumerate(range(0, cfg.paths, BLOCK_SIZE)):
        n = min(BLOCK_SIZE, cfg.paths - lo)
        stream = cfg.rng.substream(j)
        if hm.kind == "me":
            x = me_sample(hm.x_law(), stream, n)
        else:
            vg = hm.variant
            mu_p, mu_n = vg.jump_means
            shape = hm.maturity / vg.nu
            x = gamma_sample(GammaParams(shape, vg.nu * mu_p), stream.substream(0), n) - gamma_sample(
                GammaParams(shape, vg.nu * mu_n), stream.substream(1), n
            )
        chunks.append(s0 * np.exp(drift + x))
    meta = {
        **hm.describe(),
        "horizon": cfg.horizon,
        "seed": cfg.rng.seed,
        "stream_id": cfg.rng.stream_id,
        "generator": GENERATOR_ID,
        "block_size": BLOCK_SIZE,
    }
    return ScenarioSet(np.concatenate(chunks), meta)


def empirical_var(pnl, p: float) -> float:
    """Minus the k-th smallest P&L, k = ceil(p * N)."""
    pnl = np.asarray(pnl, dtype=float).ravel()
    if pnl.size == 0:
        raise ParameterError("P&L sample is empty")
    if not 0 < p < 1:
        raise ParameterError("level must lie in (0, 1)")
    if round(p * pnl.size, 9) < 1:
        raise ParameterError("level * sample size must be at least 1")
    k = _order_index(p, pnl.size)
    return float(-np.partition(pnl, k - 1)[k - 1])


def _price_scenarios(pricer, s):
    try:
        out = np.asarray(pricer(s), dtype=float)
        if out.shape != s.shape:
            raise TypeError
    except (TypeError, ValueError, ArithmeticError):
        out = np.empty_like(s)
        for i, x in enumerate(s):
            try:
                out[i] = pricer(float(x))
            except (ValueError, ArithmeticError) as exc:
                raise ScenarioPricingError(i, float(x)) from exc
    bad = ~np.isfinite(out)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ScenarioPricingError(i, float(s[i]))
    return out


def full_mc_var(model: ModelSpec, mk: MarketSetup, payoff, pricer, cfg: VaRConfig, source: str = "pricer", scenarios: ScenarioSet | None = None) -> VaRResult:
    """Reprice the option under every scenario."""
    sc = simulate_scenarios(model, mk.s0, cfg) if scenarios is None else scenarios
    base = float(np.asarray(pricer(mk.s0)))
    pnl = _price_scenarios(pricer, sc.prices) - base
    meta = {**sc.meta, "payoff": str(getattr(payoff, "value", payoff)), "base_price": base, "quantile": "order statistic k=ceil(pN)"}
    return VaRResult(empirical_var(pnl, cfg.level), "full-mc", source, cfg.level, cfg.paths, meta)


def delta_gamma_var(delta: float, gamma: float, model: ModelSpec, s0: float, cfg: VaRConfig, source: str = "greeks", scenarios: ScenarioSet | None = None) -> VaRResult:
    """Second-order Taylor P&L on the same scenarios as ``full_mc_var``."""
    if not (math.isfinite(delta) and math.isfinite(gamma)):
        raise ParameterError("Delta and Gamma must be finite")
    sc = simulate_scenarios(model, s0, cfg) if scenarios is None else scenarios
    ds = sc.prices - s0
    pnl = delta * ds + 0.5 * gamma * ds * ds
    meta = {**sc.meta, "delta": delta, "gamma": gamma, "quantile": "order statistic k=ceil(pN)"}
    return VaRResult(empirical_var(pnl, cfg.level), "delta-gamma", source, cfg.level, cfg.paths, meta)
