"""Risk-neutral model layer.

The terminal stock price is ``S_T = S0 * exp(r*T + m + X_T)`` where ``m`` is the
mean correction and ``X_T`` is either Variance Gamma or ME(0, eta/sqrt(T), lam/sqrt(T)).
``model_cf`` is the characteristic function of ``log(S_T / S0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
import math

import numpy as np

from .distributions import MEParams, me_cf
from .errors import ParameterError, StripError, UndefinedAtJump

# |d| below this counts as sitting exactly on S0*
JUMP_TOL = 1e-13


@dataclass(frozen=True)
class MERates:
    eta: float
    lam: float

    def __post_init__(self):
        if not (self.eta > 0 and self.lam > 0):
            raise ParameterError(f"ME rates must be positive, got eta={self.eta}, lam={self.lam}")


@dataclass(frozen=True)
class VGParams:
    sigma: float
    nu: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.sigma > 0 and self.nu > 0):
            raise ParameterError(f"VG needs sigma > 0 and nu > 0, got {self.sigma}, {self.nu}")
        if self.log_argument <= 0:
            raise ParameterError("VG mean correction does not exist: 1 - theta*nu - sigma^2*nu/2 <= 0")

    @property
    def log_argument(self) -> float:
        return 1.0 - self.theta * self.nu - 0.5 * self.sigma**2 * self.nu

    @property
    def jump_means(self) -> tuple[float, float]:
        """(mu_p, mu_n): the VG law is nu*mu_p*Gamma(T/nu) - nu*mu_n*Gamma(T/nu)."""
        root = 0.5 * math.sqrt(self.theta**2 + 2.0 * self.sigma**2 / self.nu)
        return root + 0.5 * self.theta, root - 0.5 * self.theta


@dataclass(frozen=True)
class ModelSpec:
    variant: MERates | VGParams
    maturity: float
    rate: float = 0.0

    def __post_init__(self):
        if not self.maturity > 0:
            raise ParameterError(f"maturity must be positive, got {self.maturity}")
        if isinstance(self.variant, MERates):
            if not self.variant.lam > math.sqrt(self.maturity):
                raise ParameterError(
                    f"ME needs lam > sqrt(T) for the mean correction to exist "
                    f"(lam={self.variant.lam}, sqrt(T)={math.sqrt(self.maturity):.6g})"
                )
        elif not isinstance(self.variant, VGParams):
            raise ParameterError(f"unknown model variant {self.variant!r}")

    @classmethod
    def me(cls, eta, lam, maturity, rate=0.0):
        return cls(MERates(eta, lam), maturity, rate)

    @classmethod
    def vg(cls, sigma, nu, theta, maturity, rate=0.0):
        return cls(VGParams(sigma, nu, theta), maturity, rate)

    @property
    def kind(self) -> str:
        return "me" if isinstance(self.variant, MERates) else "vg"

    def at_horizon(self, t: float) -> "ModelSpec":
        return replace(self, maturity=t)

    def x_law(self) -> MEParams:
        """Law of X_T in the ME model."""
        if self.kind != "me":
            raise ParameterError("x_law is only defined for the ME model")
        s = math.sqrt(self.maturity)
        return MEParams(0.0, self.variant.eta / s, self.variant.lam / s)

    @property
    def mean_x(self) -> float:
        """E[X_T]."""
        if self.kind == "me":
            return self.x_law().mean
        return self.variant.theta * self.maturity

    def describe(self) -> dict:
        d = {"model": self.kind, "maturity": self.maturity, "rate": self.rate}
        if self.kind == "me":
            d.update(eta=self.variant.eta, lam=self.variant.lam)
        else:
            d.update(sigma=self.variant.sigma, nu=self.variant.nu, theta=self.variant.theta)
        return d


@dataclass(frozen=True)
class MarketSetup:
    s0: float
    strike: float

    def __post_init__(self):
        if not (self.s0 > 0 and self.strike > 0):
            raise ParameterError(f"spot and strike must be positive, got {self.s0}, {self.strike}")


@dataclass(frozen=True)
class MEDigitalGeometry:
    s0_star: float
    d: float


def mean_correction(m: ModelSpec) -> float:
    T = m.maturity
    if m.kind == "vg":
        return T / m.variant.nu * math.log(m.variant.log_argument)
    eta, lam, s = m.variant.eta, m.variant.lam, math.sqrt(T)
    return -math.log(0.5 * (lam / (lam - s) + eta / (eta + s)))


def model_cf(m: ModelSpec, u):
    """Characteristic function of log(S_T/S0), vectorised over complex ``u``."""
    u = np.asarray(u, dtype=complex)
    drift = m.rate * m.maturity + mean_correction(m)
    if m.kind == "me":
        out = np.exp(1j * u * drift) * me_cf(m.x_law(), u)
        return out[()] if np.ndim(out) == 0 else out
    vg = m.variant
    base = 1.0 - 1j * u * vg.theta * vg.nu + 0.5 * vg.sigma**2 * vg.nu * u * u
    if np.any(base.real <= 0):
        raise StripError("VG characteristic function base left the right half-plane")
    out = np.exp(1j * u * drift - (m.maturity / vg.nu) * np.log(base))
    return out[()] if out.ndim == 0 else out


def _require_me(m: ModelSpec):
    if m.kind != "me":
        raise ParameterError("closed-form digital analytics exist only for the ME model")


def me_digital_geometry(m: ModelSpec, mk: MarketSetup) -> MEDigitalGeometry:
    _require_me(m)
    mc = mean_correction(m)
    T, r = m.maturity, m.rate
    return MEDigitalGeometry(
        s0_star=mk.strike * math.exp(-mc - r * T),
        d=math.log(mk.strike / mk.s0) - r * T - mc,
    )


def _log_moneyness(m: ModelSpec, s0, strike):
    return np.log(strike / np.asarray(s0, dtype=float)) - m.rate * m.maturity - mean_correction(m)


def me_digital_price(m: ModelSpec, mk: MarketSetup | None = None, *, s0=None):
    """Digital put price; pass ``s0=`` (array) to price many spots at the strike of ``mk``."""
    _require_me(m)
    s0 = mk.s0 if s0 is None else s0
    d = _log_moneyness(m, s0, mk.strike)
    T, r = m.maturity, m.rate
    eta, lam, sT = m.variant.eta, m.variant.lam, math.sqrt(T)
    above = 0.5 * np.exp(-r * T + eta / sT * np.minimum(d, 0.0))
    below = np.exp(-r * T) * (1.0 - 0.5 * np.exp(-lam / sT * np.maximum(d, 0.0)))
    out = np.where(d <= 0, above, below)
    return out[()] if out.ndim == 0 else out


def _check_jump(m, d, greek, strike, force=False):
    at_jump = np.abs(d) <= JUMP_TOL
    if np.any(at_jump) and (force or m.variant.eta != m.variant.lam):
        s0_star = strike * math.exp(-mean_correction(m) - m.rate * m.maturity)
        raise UndefinedAtJump(greek, s0_star)


def me_digital_delta(m: ModelSpec, mk: MarketSetup, *, s0=None):
    _require_me(m)
    s0 = np.asarray(mk.s0 if s0 is None else s0, dtype=float)
    d = _log_moneyness(m, s0, mk.strike)
    _check_jump(m, d, "delta", mk.strike)
    T, r = m.maturity, m.rate
    eta, lam, sT = m.variant.eta, m.variant.lam, math.sqrt(T)
    above = -eta / (2 * sT * s0) * np.exp(-r * T + eta / sT * np.minimum(d, 0.0))
    below = -lam / (2 * sT * s0) * np.exp(-r * T - lam / sT * np.maximum(d, 0.0))
    out = np.where(d < 0, above, below)
    return out[()] if out.ndim == 0 else out


def me_digital_gamma(m: ModelSpec, mk: MarketSetup, *, s0=None):
    _require_me(m)
    s0 = np.asarray(mk.s0 if s0 is None else s0, dtype=float)
    d = _log_moneyness(m, s0, mk.strike)
    # the Delta kinks at S0* even for eta == lam
    _check_jump(m, d, "gamma", mk.strike, force=True)
    T, r = m.maturity, m.rate
    eta, lam, sT = m.variant.eta, m.variant.lam, math.sqrt(T)
    above = (eta**2 / T + eta / sT) / (2 * s0**2) * np.exp(-r * T + eta / sT * np.minimum(d, 0.0))
    below = (-(lam**2) / T + lam / sT) / (2 * s0**2) * np.exp(-r * T - lam / sT * np.maximum(d, 0.0))
    out = np.where(d < 0, above, below)
    return out[()] if out.ndim == 0 else out

