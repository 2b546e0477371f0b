"""Central finite-difference Delta and Gamma on top of any pricing function."""

from __future__ import annotations

from dataclasses import dataclass
import math

from .errors import ParameterError


def choose_step(pricing_error: float) -> float:
    """Cube root of the pricing error, rounded to one significant figure.

    >>> choose_step(1e-6)
    0.01
    """
    if not pricing_error > 0:
        raise ParameterError(f"pricing error must be positive, got {pricing_error}")
    return float(f"{pricing_error ** (1 / 3):.0e}")


@dataclass(frozen=True)
class FDConfig:
    """Step size for central differences.

    ``step`` is in spot units unless ``relative`` is set, in which case the
    actual step is ``step * s0``.
    """

    step: float = 0.01
    pricing_error: float | None = None
    relative: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ParameterError(f"finite-difference step must be positive, got {self.step}")
        if self.pricing_error is not None:
            if not self.pricing_error > 0:
                raise ParameterError("pricing error must be positive")
            ideal = self.pricing_error ** (1 / 3)
            if not ideal / 10 <= self.step <= ideal * 10:
                raise ParameterError(
                    f"step {self.step} is more than a factor 10 away from the cube-root rule ({ideal:.3g})"
                )

    @classmethod
    def from_error(cls, pricing_error: float) -> "FDConfig":
        return cls(step=choose_step(pricing_error), pricing_error=pricing_error)

    def step_at(self, s0: float) -> float:
        return self.step * s0 if self.relative else self.step


def _check(s0, h):
    if not h > 0:
        raise ParameterError(f"finite-difference step must be positive, got {h}")
    if not s0 - h > 0:
        raise ParameterError(f"s0 - h must stay positive (s0={s0}, h={h})")


def fd_delta(price_fn, s0: float, h: float) -> float:
    _check(s0, h)
    return (float(price_fn(s0 + h)) - float(price_fn(s0 - h))) / (2 * h)


def fd_gamma(price_fn, s0: float, h: float) -> float:
    _check(s0, h)
    return (float(price_fn(s0 + h)) - 2 * float(price_fn(s0)) + float(price_fn(s0 - h))) / (h * h)


def fd_report(price_fn, s0: float, cfg: FDConfig = FDConfig()) -> tuple[float, float, float]:
    """(price, Delta, Gamma) from three price evaluations."""
    h = cfg.step_at(s0)
    _check(s0, h)
    up, mid, down = (float(price_fn(x)) for x in (s0 + h, s0, s0 - h))
    if not all(map(math.isfinite, (up, mid, down))):
        raise ArithmeticError("pricing function returned a non-finite value")
    return mid, (up - down) / (2 * h), (up - 2 * mid + down) / (h * h)
