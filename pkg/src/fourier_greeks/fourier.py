"""Carr-Madan, COS and Lewis engines for calls and digital puts.

Every engine returns the price (order 0), Delta (order 1) or Gamma (order 2) by
differentiating its integrand or series in S0 and integrating the result. Those
Greeks are wrong whenever the differentiated integrand stops being integrable;
they are still returned, and ``price_all`` attaches diagnostic warnings to them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import IntegrationError, ParameterError
from .models import MarketSetup, ModelSpec, mean_correction, me_digital_delta, me_digital_gamma, me_digital_price, model_cf
from .quadrature import SimpsonGrid, laguerre_integrate, laguerre_rule

ORDERS = (0, 1, 2)
GREEK_NAMES = ("price", "delta", "gamma")


class Payoff(str, Enum):
    CALL = "call"
    DIGITAL_PUT = "digital-put"


@dataclass(frozen=True)
class CarrMadanConfig:
    alpha: float = 0.1
    truncation: float = 4800.0
    # 2**17 grid intervals need one extra point for composite Simpson
    grid_points: int = 2**17 + 1

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError("Carr-Madan damping factor must be positive")
        SimpsonGrid(self.truncation, self.grid_points)


@dataclass(frozen=True)
class CosConfig:
    range_width: float = 60.0
    terms: int = 100_000
    center: float | None = None

    def __post_init__(self):
        if not self.range_width > 0:
            raise ParameterError("COS truncation range must be positive")
        if self.terms < 2:
            raise ParameterError("COS needs at least two terms")


@dataclass(frozen=True)
class LewisConfig:
    alpha: float | None = None
    order: int = 2000

    def resolved_alpha(self, payoff: Payoff) -> float:
        if self.alpha is None:
            return 1.1 if payoff is Payoff.CALL else -0.1
        return self.alpha


@dataclass
class GreeksReport:
    price: float
    delta: float
    gamma: float
    method: str
    warnings: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    error: str | None = None

    def value(self, order: int) -> float:
        return (self.price, self.delta, self.gamma)[order]


def _check_order(order):
    if order not in ORDERS:
        raise ParameterError(f"order must be 0, 1 or 2, got {order!r}")


def _finite_or_raise(y, v, what):
    bad = ~np.isfinite(y)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise IntegrationError(f"{what} integrand is not finite at v={v[i]:.6g}", node=float(v[i]))


# --------------------------------------------------------------------------- #
# Carr-Madan
# --------------------------------------------------------------------------- #

def _cm_integrands(model, mk, payoff, cfg):
    grid = SimpsonGrid(cfg.truncation, cfg.grid_points)
    v = grid.nodes()
    a = cfg.alpha
    k, s = math.log(mk.strike), math.log(mk.s0)
    if payoff is Payoff.CALL:
        phi = model_cf(model, v - 1j * (a + 1))
        base = np.exp(-1j * v * k + (a + 1 + 1j * v) * s) * phi / (a * a + a - v * v + 1j * (2 * a + 1) * v)
        f1 = (a + 1 + 1j * v) / mk.s0
        f2 = (a + 1 + 1j * v) * (a + 1j * v) / mk.s0**2
        scale = math.exp(-a * k) / math.pi
    else:
        phi = model_cf(model, v + 1j * a)
        base = np.exp(-1j * v * k + (-a + 1j * v) * s) * phi / (1j * v - a)
        f1 = (-a + 1j * v) / mk.s0
        f2 = (-a + 1j * v) * (-a - 1 + 1j * v) / mk.s0**2
        scale = -math.exp(a * k) / math.pi
    scale *= math.exp(-model.rate * model.maturity)
    return grid, v, scale, (base, base * f1, base * f2)


def cm_value(model: ModelSpec, mk: MarketSetup, payoff: Payoff, cfg: CarrMadanConfig = CarrMadanConfig(), order: int = 0) -> float:
    _check_order(order)
    return float(cm_values(model, mk, payoff, cfg)[order])


def cm_values(model, mk, payoff, cfg=CarrMadanConfig()) -> np.ndarray:
    """Carr-Madan price, Delta and Gamma from one characteristic-function pass."""
    grid, v, scale, integrands = _cm_integrands(model, mk, Payoff(payoff), cfg)
    w = grid.weights()
    out = np.empty(3)
    for i, h in enumerate(integrands):
        h = h.real
        _finite_or_raise(h, v, "Carr-Madan")
        out[i] = scale * (w @ h)
    return out


# --------------------------------------------------------------------------- #
# COS
# --------------------------------------------------------------------------- #

class CosRepricer:
    """COS pricer with the coefficients phi(u_k) * V_k cached.

    The spot enters only through the phase exp(i u_k log(S/K)), so one instance
    reprices any number of spots against a fixed truncation interval. The phase
    is split as exp(i d k1 y) * exp(i d K1 k2 y) with k = k1 + K1*k2, which turns
    the sum over k into a dense complex matrix product.

    Calls are priced as puts plus S0 - K exp(-rT); the call cosine coefficients on
    a wide interval multiply exp(b) and lose all precision.
    """

    def __init__(self, model: ModelSpec, strike: float, payoff: Payoff, cfg: CosConfig = CosConfig(), s0_ref: float | None = None):
        payoff = Payoff(payoff)
        if cfg.center is not None:
            center = cfg.center
        elif s0_ref is not None:
            center = math.log(s0_ref / strike) + model.rate * model.maturity + mean_correction(model) + model.mean_x
        else:
            raise ParameterError("COS needs either an explicit center or a reference spot")
        a, b = center - cfg.range_width / 2, center + cfg.range_width / 2
        if not a < 0 < b:
            raise ParameterError(f"COS interval [{a:.6g}, {b:.6g}] must contain the strike point 0")
        self.model, self.strike, self.payoff, self.cfg = model, strike, payoff, cfg
        self.a, self.b = a, b
        self.discount = math.exp(-model.rate * model.maturity)

        n = cfg.terms
        u = np.arange(n) * (math.pi / (b - a))
        psi = np.empty(n)
        psi[0] = -a
        psi[1:] = np.sin(-u[1:] * a) / u[1:]
        if payoff is Payoff.DIGITAL_PUT:
            v = 2.0 / (b - a) * psi
        else:
            chi = (np.cos(-u * a) - math.exp(a) + u * np.sin(-u * a)) / (1.0 + u * u)
            v = 2.0 / (b - a) * strike * (psi - chi)
        coef = model_cf(model, u) * v
        coef[0] *= 0.5
        iu = 1j * u
        self._coefs = (coef, coef * iu, coef * (iu * iu - iu))
        self._k1 = math.ceil(math.sqrt(n))
        self._k2 = math.ceil(n / self._k1)
        self._du = math.pi / (b - a)
        self._blocks = {}

    def _block(self, order):
        if order not in self._blocks:
            c = np.zeros(self._k1 * self._k2, dtype=complex)
            c[: self.cfg.terms] = self._coefs[order]
            self._blocks[order] = c.reshape(self._k2, self._k1).T.copy()
        return self._blocks[order]

    def series(self, s, order=0, chunk=2048) -> np.ndarray:
        """Re sum_k c_k exp(i u_k (log(s/K) - a)), for an array of spots."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        c = self._block(order)
        j1 = np.arange(self._k1)
        j2 = np.arange(self._k2) * self._k1
        out = np.empty(s.shape[0])
        for lo in range(0, s.shape[0], chunk):
            y = np.log(s[lo : lo + chunk] / self.strike) - self.a
            inner = np.exp(1j * self._du * np.outer(y, j1)) @ c
            outer = np.exp(1j * self._du * np.outer(y, j2))
            out[lo : lo + chunk] = np.einsum("ij,ij->i", inner, outer).real
        return out

    def __call__(self, s, order: int = 0):
        _check_order(order)
        arr = np.asarray(s, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        val = self.discount * self.series(flat, order) / flat**order
        if self.payoff is Payoff.CALL:
            if order == 0:
                val = val + flat - self.strike * self.discount
            elif order == 1:
                val = val + 1.0
        _finite_or_raise(val, flat, "COS")
        return val.reshape(arr.shape)[()] if arr.ndim == 0 else val.reshape(arr.shape)


def cos_value(model: ModelSpec, mk: MarketSetup, payoff: Payoff, cfg: CosConfig = CosConfig(), order: int = 0) -> float:
    _check_order(order)
    return float(CosRepricer(model, mk.strike, payoff, cfg, s0_ref=mk.s0)(mk.s0, order))


# --------------------------------------------------------------------------- #
# Lewis
# --------------------------------------------------------------------------- #

def payoff_transform(payoff: Payoff, strike: float, z):
    """Fourier transform of the payoff in x = log(S_T).

    Calls need Im(z) > 1, digital puts Im(z) < 0.
    """
    z = np.asarray(z, dtype=complex)
    iz = 1j * z
    k = math.log(strike)
    if Payoff(payoff) is Payoff.CALL:
        return np.exp((1 + iz) * k) / (iz * (1 + iz))
    return np.exp(iz * k) / iz


def _lewis_alpha(payoff, cfg):
    a = cfg.resolved_alpha(payoff)
    if payoff is Payoff.CALL and not a > 1:
        raise ParameterError(f"Lewis call damping must exceed 1, got {a}")
    if payoff is Payoff.DIGITAL_PUT and not a < 0:
        raise ParameterError(f"Lewis digital-put damping must be negative, got {a}")
    return a


def lewis_values(model, mk, payoff, cfg=LewisConfig()) -> np.ndarray:
    payoff = Payoff(payoff)
    a = _lewis_alpha(payoff, cfg)
    rule = laguerre_rule(cfg.order)
    v = rule.nodes
    g = np.exp((a - 1j * v) * math.log(mk.s0)) * model_cf(model, -1j * a - v) * payoff_transform(payoff, mk.strike, v + 1j * a)
    factors = (1.0, (a - 1j * v) / mk.s0, (a - 1j * v) * (a - 1 - 1j * v) / mk.s0**2)
    scale = math.exp(-model.rate * model.maturity) / math.pi
    return np.array([scale * laguerre_integrate(rule, lambda _, f=f: (g * f).real) for f in factors])


def lewis_value(model: ModelSpec, mk: MarketSetup, payoff: Payoff, cfg: LewisConfig = LewisConfig(), order: int = 0) -> float:
    _check_order(order)
    return float(lewis_values(model, mk, payoff, cfg)[order])


# --------------------------------------------------------------------------- #
# Driver
# --------------------------------------------------------------------------- #

FOURIER_METHODS = ("cm", "cos", "lewis")
DEFAULT_CONFIGS = {"cm": CarrMadanConfig(), "cos": CosConfig(), "lewis": LewisConfig()}


def contour_shift(method: str, payoff: Payoff, cfg) -> float:
    """Imaginary part of the argument at which each engine evaluates phi."""
    payoff = Payoff(payoff)
    if method == "cm":
        return -(cfg.alpha + 1) if payoff is Payoff.CALL else cfg.alpha
    if method == "lewis":
        return -cfg.resolved_alpha(payoff)
    return 0.0


def make_pricer(method: str, model: ModelSpec, mk: MarketSetup, payoff: Payoff, cfg=None):
    """A vectorised spot -> price function for one engine at fixed strike."""
    payoff = Payoff(payoff)
    cfg = DEFAULT_CONFIGS.get(method) if cfg is None else cfg
    if method == "analytic":
        if model.kind != "me" or payoff is not Payoff.DIGITAL_PUT:
            raise ParameterError("analytic prices exist only for ME digital puts")
        return lambda s: me_digital_price(model, mk, s0=s)
    if method == "cos":
        return CosRepricer(model, mk.strike, payoff, cfg, s0_ref=mk.s0)
    if method in ("cm", "lewis"):
        engine = cm_value if method == "cm" else lewis_value

        def price(s):
            arr = np.asarray(s, dtype=float)
            out = np.array([engine(model, MarketSetup(x, mk.strike), payoff, cfg) for x in np.atleast_1d(arr).ravel()])
            return out.reshape(arr.shape)[()] if arr.ndim == 0 else out.reshape(arr.shape)

        return price
    raise ParameterError(f"unknown pricing method {method!r}")


def _engine_values(method, model, mk, payoff, cfg):
    if method == "cm":
        return cm_values(model, mk, payoff, cfg), {"alpha": cfg.alpha, "truncation": cfg.truncation, "grid_points": cfg.grid_points}
    if method == "cos":
        rp = CosRepricer(model, mk.strike, payoff, cfg, s0_ref=mk.s0)
        return np.array([rp(mk.s0, o) for o in ORDERS]), {"a": rp.a, "b": rp.b, "terms": cfg.terms}
    if method == "lewis":
        return lewis_values(model, mk, payoff, cfg), {"alpha": cfg.resolved_alpha(payoff), "order": cfg.order}
    if method == "analytic":
        if payoff is not Payoff.DIGITAL_PUT:
            raise ParameterError("analytic Greeks exist only for ME digital puts")
        vals = [me_digital_price(model, mk), me_digital_delta(model, mk), me_digital_gamma(model, mk)]
        return np.array(vals, dtype=float), {}
    raise ParameterError(f"unknown method {method!r}")


def price_all(model: ModelSpec, mk: MarketSetup, payoff: Payoff, configs: dict, fd_base: str = "cm") -> dict[str, GreeksReport]:
    """One report per requested method.

    ``configs`` maps a method name (``cm``, ``cos``, ``lewis``, ``analytic`` or
    ``fd``) to its config, or to None for defaults. The ``fd`` entry takes an
    ``FDConfig`` and differentiates the ``fd_base`` engine's prices. A failing
    engine yields a report with ``error`` set and NaN values; the others still run.
    """
    from .diagnostics import check_conditions, estimate_decay, warnings_for
    from .fdgreeks import FDConfig, fd_report

    payoff = Payoff(payoff)
    reports = {}
    for method, cfg in configs.items():
        try:
            if method == "fd":
                cfg = FDConfig() if cfg is None else cfg
                base_cfg = configs.get(fd_base) or DEFAULT_CONFIGS.get(fd_base)
                price_fn = make_pricer(fd_base, model, mk, payoff, base_cfg)
                vals = fd_report(price_fn, mk.s0, cfg)
                meta = {"base": fd_base, "step": cfg.step_at(mk.s0)}
                warn = []
                if fd_base in FOURIER_METHODS:
                    est = estimate_decay(model, contour_shift(fd_base, payoff, base_cfg))
                    warn = warnings_for(check_conditions(model, payoff, est), fd_base, orders=(0,))
                reports[method] = GreeksReport(*vals, method=f"fd[{fd_base}]", warnings=warn, meta=meta)
                continue
            cfg = DEFAULT_CONFIGS.get(method) if cfg is None else cfg
            vals, meta = _engine_values(method, model, mk, payoff, cfg)
            warn = []
            if method in FOURIER_METHODS:
                est = estimate_decay(model, contour_shift(method, payoff, cfg))
                meta["decay_exponent"] = est.exponent
                warn = warnings_for(check_conditions(model, payoff, est), method)
            reports[method] = GreeksReport(*map(float, vals), method=method, warnings=warn, meta=meta)
        except (ArithmeticError, ValueError) as exc:
            reports[method] = GreeksReport(math.nan, math.nan, math.nan, method=method, error=f"{type(exc).__name__}: {exc}")
    return reports
