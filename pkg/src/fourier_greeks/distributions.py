"""Elementary probability laws: the two-sided exponential (ME) law and gamma sampling.

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StripError

#: Identity of the uniform generator, recorded in every simulation artifact.
GENERATOR_ID = "numpy.random.Philox-4x64 keyed by SeedSequence(seed, spawn_key=(stream_id, *path))"


@dataclass(frozen=True)
class MEParams:
    """ME(mu, eta, lam): rate ``eta`` left of ``mu``, rate ``lam`` right of it."""

    mu: float
    eta: float
    lam: float

    def __post_init__(self):
        if not (self.eta > 0 and self.lam > 0):
            raise ParameterError(f"ME rates must be positive, got eta={self.eta}, lam={self.lam}")

    @property
    def mean(self) -> float:
        return self.mu + 0.5 * (1.0 / self.lam - 1.0 / self.eta)


@dataclass(frozen=True)
class GammaParams:
    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ParameterError(f"gamma shape and scale must be positive, got {self.shape}, {self.scale}")


@dataclass(frozen=True)
class RngStream:
    """Value-like handle on a reproducible uniform stream.

    Two equal ``RngStream`` values always produce the same variates. ``substream``
    derives independent children, e.g. one per simulation block.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not (0 <= self.seed < 2**64 and 0 <= self.stream_id < 2**64):
            raise ParameterError("seed and stream_id must be unsigned 64-bit integers")

    def substream(self, k: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + (int(k),))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.Philox(ss))

    def uniforms(self, n: int) -> np.ndarray:
        """n uniforms on the open interval (0, 1)."""
        u = self.generator().random(n)
        # random() lives on [0, 1); move the single lattice point 0 inside
        u[u == 0.0] = 2.0**-54
        return u


def me_pdf(p: MEParams, x):
    x = np.asarray(x, dtype=float)
    z = x - p.mu
    left = 0.5 * p.eta * np.exp(p.eta * np.minimum(z, 0.0))
    right = 0.5 * p.lam * np.exp(-p.lam * np.maximum(z, 0.0))
    out = np.where(z < 0, left, right)
    return out[()] if out.ndim == 0 else out


def me_cdf(p: MEParams, x):
    x = np.asarray(x, dtype=float)
    z = x - p.mu
    left = 0.5 * np.exp(p.eta * np.minimum(z, 0.0))
    right = 1.0 - 0.5 * np.exp(-p.lam * np.maximum(z, 0.0))
    out = np.where(z <= 0, left, right)
    return out[()] if out.ndim == 0 else out


def me_quantile(p: MEParams, y):
    """Inverse cdf; the lam branch is used for y >= 1/2."""
    y = np.asarray(y, dtype=float)
    if np.any(~((y > 0) & (y < 1))):
        raise ParameterError("quantile level must lie in the open interval (0, 1)")
    lo = np.log(2.0 * np.minimum(y, 0.5)) / p.eta
    hi = -np.log(2.0 * (1.0 - np.maximum(y, 0.5))) / p.lam
    out = p.mu + np.where(y < 0.5, lo, hi)
    return out[()] if out.ndim == 0 else out


def me_cf(p: MEParams, u):
    """E[exp(iuX)]; finite for -lam < Im(u) < eta."""
    u = np.asarray(u, dtype=complex)
    im = u.imag
    if np.any((im <= -p.lam) | (im >= p.eta)):
        raise StripError(f"Im(u) must lie in ({-p.lam}, {p.eta}) for the ME characteristic function")
    iu = 1j * u
    out = np.exp(iu * p.mu) / 2 * (p.lam / (p.lam - iu) + p.eta / (iu + p.eta))
    return out[()] if out.ndim == 0 else out


def me_sample(p: MEParams, rng: RngStream, n: int) -> np.ndarray:
    """Inverse-transform draws from ME(mu, eta, lam)."""
    if n < 1:
        raise ParameterError("sample size must be at least 1")
    return me_quantile(p, rng.uniforms(n))


def gamma_sample(g: GammaParams, rng: RngStream, n: int) -> np.ndarray:
    """Gamma(shape, scale) variates.

    numpy's sampler is the Marsaglia-Tsang squeeze/rejection method with the
    U**(1/shape) boost below shape 1. For very small shapes a fraction of draws
    underflows to 0.0 in double precision (about ``2**(-1074*shape)``).
    """
    if n < 1:
        raise ParameterError("sample size must be at least 1")
    return g.scale * rng.generator().standard_gamma(g.shape, n)
