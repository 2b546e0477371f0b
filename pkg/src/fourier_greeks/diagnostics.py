"""Tail-decay estimates of the characteristic function and the integrability flags built on them.

If ``|phi(u)| ~ u**-p`` then each derivative in S0 multiplies the Fourier integrand
by one more power of v. An engine's order-n value is trustworthy only while the
differentiated integrand stays integrable, which turns into a threshold on p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ParameterError
from .fourier import GREEK_NAMES, Payoff
from .models import ModelSpec, model_cf

ENGINES = ("cm", "cos", "lewis")
BORDERLINE_BAND = 0.05

# p must exceed these for orders 0, 1, 2
_FOURIER_THRESHOLDS = {Payoff.CALL: (-1.0, 0.0, 1.0), Payoff.DIGITAL_PUT: (0.0, 1.0, 2.0)}
# COS Greeks want a continuously differentiable density, proxied by p > 2
_COS_SMOOTHNESS = 2.0


class Flag(str, Enum):
    SATISFIED = "satisfied"
    BORDERLINE = "borderline"
    VIOLATED = "violated"


_SEVERITY = {Flag.SATISFIED: 0, Flag.BORDERLINE: 1, Flag.VIOLATED: 2}


@dataclass(frozen=True)
class DecayEstimate:
    exponent: float
    fit_range: tuple[float, float]
    residual: float

    def __post_init__(self):
        if not self.fit_range[0] < self.fit_range[1]:
            raise ParameterError("fit range must be increasing")
        if not self.residual >= 0:
            raise ParameterError("residual must be non-negative")


@dataclass
class ConditionReport:
    payoff: Payoff
    exponent: float
    flags: dict[tuple[str, int], Flag] = field(default_factory=dict)
    rationale: dict[tuple[str, int], str] = field(default_factory=dict)

    def flag(self, engine: str, order: int) -> Flag:
        return self.flags[(engine, order)]

    def failed(self, engine: str) -> list[int]:
        return [o for o in range(3) if self.flags[(engine, o)] is not Flag.SATISFIED]


def fit_decay(cf, shift: float = 0.0, lo: float = 1e3, hi: float = 1e6, points: int = 50) -> DecayEstimate:
    """Least-squares slope of log|cf(u + i*shift)| against log u, negated."""
    u = np.geomspace(lo, hi, points)
    mod = np.abs(np.asarray(cf(u + 1j * shift)))
    if not np.all(np.isfinite(mod) & (mod > 0)):
        raise ArithmeticError("characteristic function vanished or overflowed on the fit contour")
    x, y = np.log(u), np.log(mod)
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    return DecayEstimate(float(-slope), (lo, hi), float(np.sqrt(np.mean(resid**2))))


def estimate_decay(model: ModelSpec, contour_shift: float = 0.0) -> DecayEstimate:
    return fit_decay(lambda z: model_cf(model, z), contour_shift)


def _classify(p, threshold, band):
    if band and abs(p - threshold) <= BORDERLINE_BAND:
        return Flag.BORDERLINE
    return Flag.SATISFIED if p > threshold else Flag.VIOLATED


def check_conditions(model: ModelSpec, payoff: Payoff, estimate: DecayEstimate) -> ConditionReport:
    payoff = Payoff(payoff)
    p = estimate.exponent
    if not np.isfinite(p):
        raise ParameterError("decay exponent must be finite")
    rep = ConditionReport(payoff, p)
    thresholds = _FOURIER_THRESHOLDS[payoff]
    for engine in ("cm", "lewis"):
        for order, thr in enumerate(thresholds):
            rep.flags[(engine, order)] = _classify(p, thr, band=order > 0)
            rep.rationale[(engine, order)] = f"differentiated integrand needs p > {thr:g}; p = {p:.3f}"

    rep.flags[("cos", 0)] = _classify(p, thresholds[0], band=False)
    rep.rationale[("cos", 0)] = f"series converges for p > {thresholds[0]:g}; p = {p:.3f}"
    vg_unbounded = model.kind == "vg" and model.maturity < model.variant.nu / 2
    for order in (1, 2):
        if vg_unbounded:
            flag, why = Flag.VIOLATED, "VG density is unbounded because T < nu/2"
        else:
            flag = _classify(p, _COS_SMOOTHNESS, band=True)
            why = f"density smoothness proxied by p > {_COS_SMOOTHNESS:g}; p = {p:.3f}"
        rep.flags[("cos", order)] = flag
        rep.rationale[("cos", order)] = why
    return rep


def warnings_for(report: ConditionReport, engine: str, orders=(0, 1, 2)) -> list[str]:
    out = []
    for order in orders:
        flag = report.flags[(engine, order)]
        if flag is Flag.VIOLATED:
            out.append(f"{GREEK_NAMES[order]}-condition-failed")
        elif flag is Flag.BORDERLINE:
            out.append(f"{GREEK_NAMES[order]}-condition-borderline")
    return out


def is_monotone(report: ConditionReport, engine: str) -> bool:
    sev = [_SEVERITY[report.flags[(engine, o)]] for o in range(3)]
    return sev == sorted(sev)
