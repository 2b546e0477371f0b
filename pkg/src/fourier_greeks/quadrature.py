"""Deterministic integration kernels: composite Simpson and high-order Gauss-Laguerre."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import IntegrationError, ParameterError

_LD = np.longdouble


@dataclass(frozen=True)
class SimpsonGrid:
    upper: float
    points: int

    def __post_init__(self):
        if not self.upper > 0:
            raise ParameterError("Simpson truncation point must be positive")
        if self.points < 3 or self.points % 2 == 0:
            raise ParameterError(f"composite Simpson needs an odd point count >= 3, got {self.points}")

    @property
    def spacing(self) -> float:
        return self.upper / (self.points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.upper, self.points)

    def weights(self) -> np.ndarray:
        w = np.full(self.points, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w * (self.spacing / 3.0)


def simpson_integrate(grid: SimpsonGrid, f) -> float:
    """Composite Simpson estimate of the integral of ``f`` over [0, upper].

    ``f`` is called once with the full node array and must return an array of
    the same length (a callable returning a scalar is broadcast).
    """
    x = grid.nodes()
    y = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return float(grid.weights() @ y)


@dataclass(frozen=True, eq=False)
class LaguerreRule:
    """Gauss-Laguerre rule for the integral of g over [0, inf).

    Stores ``w_i * exp(x_i)`` rather than the plain weights, which underflow far
    below the smallest double once the order reaches a few hundred.
    """

    order: int
    nodes: np.ndarray
    modified_weights: np.ndarray
    log_weights: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)


def _laguerre_pair(n, x):
    """Scaled (L_n(x), L_{n-1}(x)) and the log of the common scale, in long double.

    Only the ratio is exact in the scaled pair; ``L_n = p_n * exp(logscale)``.
    """
    x = np.asarray(x, dtype=_LD)
    p_prev = np.ones_like(x)
    p = 1 - x
    logscale = np.zeros_like(x)
    limit = _LD(1e150)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1 - x) * p - k * p_prev) / (k + 1)
        big = np.abs(p) > limit
        if big.any():
            s = np.where(big, np.abs(p), _LD(1))
            p, p_prev = p / s, p_prev / s
            logscale = logscale + np.log(s)
    return p, p_prev, logscale


def _polish_roots(n, guess, max_iter=60, tol=1e-13):
    """Newton iteration on L_n, each root confined to a sign-change bracket.

    A root is frozen once its relative Newton step drops below ``tol``; the
    long-double recurrence is noisy at about 1e-14 relative near the smallest roots.
    """
    z = guess.astype(_LD)
    gaps = np.diff(z)
    lo = np.empty_like(z)
    hi = np.empty_like(z)
    lo[0] = z[0] / 2
    lo[1:] = z[:-1] + gaps / 2
    hi[:-1] = lo[1:]
    hi[-1] = z[-1] + gaps[-1]
    f_lo = np.sign(_laguerre_pair(n, lo)[0])
    f_hi = np.sign(_laguerre_pair(n, hi)[0])
    if np.any(f_lo * f_hi >= 0):
        bad = int(np.flatnonzero(f_lo * f_hi >= 0)[0])
        raise IntegrationError(f"Laguerre root {bad} of order {n} is not isolated by its bracket", node=float(z[bad]))
    active = np.arange(n)
    for _ in range(max_iter):
        za = z[active]
        p, p_prev, _ = _laguerre_pair(n, za)
        # x L_n'(x) = n (L_n - L_{n-1})
        step = za * p / (n * (p - p_prev))
        z_new = za - step
        on_lo_side = np.sign(p) == f_lo[active]
        lo[active] = np.where(on_lo_side, za, lo[active])
        hi[active] = np.where(on_lo_side, hi[active], za)
        la, ha = lo[active], hi[active]
        outside = ~((z_new > la) & (z_new < ha)) | ~np.isfinite(z_new)
        z_new = np.where(outside, (la + ha) / 2, z_new)
        z[active] = z_new
        moving = np.abs(z_new - za) > tol * za
        active = active[moving]
        if active.size == 0:
            p, p_prev, _ = _laguerre_pair(n, z)
            return z - z * p / (n * (p - p_prev))
    worst = int(active[0])
    raise IntegrationError(f"Laguerre root {worst} of order {n} did not converge", node=float(z[worst]))


@lru_cache(maxsize=8)
def laguerre_rule(order: int) -> LaguerreRule:
    """Nodes and weights of the order-``order`` Gauss-Laguerre rule.

    Golub-Welsch eigenvalues seed a bracketed Newton iteration on the three-term
    recurrence, run in extended precision; weights come from
    ``w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2)`` evaluated in log space.
    """
    n = int(order)
    if n < 1:
        raise ParameterError("Gauss-Laguerre order must be at least 1")
    if n == 1:
        one = np.array([1.0])
        return LaguerreRule(1, one, one * np.e, np.zeros(1))
    k = np.arange(n, dtype=float)
    guess = eigvalsh_tridiagonal(2 * k + 1, k[1:])
    z = _polish_roots(n, guess)
    p_next, _, logscale = _laguerre_pair(n + 1, z)
    log_w = np.log(z) - 2 * np.log(_LD(n + 1)) - 2 * (np.log(np.abs(p_next)) + logscale)
    nodes = z.astype(float)
    if np.any(np.diff(nodes) <= 0):
        raise IntegrationError(f"Gauss-Laguerre nodes of order {n} are not strictly increasing")
    return LaguerreRule(
        order=n,
        nodes=nodes,
        modified_weights=np.exp(log_w + z).astype(float),
        log_weights=log_w.astype(float),
    )


def laguerre_integrate(rule: LaguerreRule, g) -> float:
    """Approximate the integral of ``g`` over [0, inf) as sum(modified_weights * g(nodes)).

    Summation runs left to right over ascending nodes.
    """
    y = np.broadcast_to(np.asarray(g(rule.nodes), dtype=float), rule.nodes.shape)
    bad = ~np.isfinite(y)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise IntegrationError(f"integrand is not finite at Gauss-Laguerre node {rule.nodes[i]:.6g}", node=float(rule.nodes[i]))
    return float(np.cumsum(rule.modified_weights * y)[-1])
