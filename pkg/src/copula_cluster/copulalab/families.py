"""Copula specifications and their samplers.

Archimedean families are drawn by frailty mixing (Marshall-Olkin):
``U_j = psi(E_j / V)`` with ``E_j`` standard exponential and ``V`` drawn
from the distribution whose Laplace transform is the generator ``psi``.
Polynomial copulas are drawn by rejection against the uniform density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .polynomial import PolynomialCopula

__all__ = [
    "Independence",
    "Comonotone",
    "Clayton",
    "Frank",
    "Gumbel",
    "GaussianEquicorr",
    "BlockProduct",
    "PolynomialCopula",
    "sample",
    "comonotone_block_product",
]


def _check_dim(dim):
    if int(dim) != dim or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim}")


@dataclass(frozen=True)
class Independence:
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)

    def _sample(self, n, rng):
        return rng.random((n, self.dim))


@dataclass(frozen=True)
class Comonotone:
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)

    def _sample(self, n, rng):
        return np.repeat(rng.random((n, 1)), self.dim, axis=1)


@dataclass(frozen=True)
class Clayton:
    dim: int
    theta: float

    def __post_init__(self):
        _check_dim(self.dim)
        if not self.theta > 0:
            raise ValueError(f"Clayton needs theta > 0, got {self.theta}")

    def _sample(self, n, rng):
        v = rng.gamma(1.0 / self.theta, 1.0, size=(n, 1))
        e = rng.standard_exponential((n, self.dim))
        return np.exp(-np.log1p(e / v) / self.theta)


@dataclass(frozen=True)
class Gumbel:
    dim: int
    theta: float

    def __post_init__(self):
        _check_dim(self.dim)
        if not self.theta >= 1:
            raise ValueError(f"Gumbel needs theta >= 1, got {self.theta}")

    def _sample(self, n, rng):
        alpha = 1.0 / self.theta
        e = rng.standard_exponential((n, self.dim))
        if alpha == 1.0:
            return np.exp(-e)
        # positive stable frailty with Laplace transform exp(-t^alpha) (Kanter's representation)
        w = rng.uniform(0.0, np.pi, size=(n, 1))
        x = rng.standard_exponential((n, 1))
        v = (np.sin(alpha * w) / np.sin(w) ** (1.0 / alpha)) * (
            np.sin((1.0 - alpha) * w) / x
        ) ** ((1.0 - alpha) / alpha)
        return np.exp(-((e / v) ** alpha))


@dataclass(frozen=True)
class Frank:
    dim: int
    theta: float

    def __post_init__(self):
        _check_dim(self.dim)
        if self.theta == 0:
            raise ValueError("Frank needs theta != 0")
        if self.theta < 0 and self.dim > 2:
            raise ValueError("negative Frank parameter is only a copula for dim = 2")

    def _sample(self, n, rng):
        th = self.theta
        if th < 0:
            # bivariate conditional inversion
            u = rng.random(n)
            w = rng.random(n)
            num = w * np.expm1(-th)
            den = w + (1.0 - w) * np.exp(-th * u)
            v = -np.log1p(num / den) / th
            return np.column_stack([u, v])
        p = -math.expm1(-th)
        if p >= 1.0:
            raise ValueError(f"Frank parameter {th} too large to sample")
        v = rng.logseries(p, size=(n, 1)).astype(float)
        e = rng.standard_exponential((n, self.dim))
        # psi(t) = -log(1 - p e^{-t}) / theta
        return -np.log1p(-p * np.exp(-e / v)) / th


@dataclass(frozen=True)
class GaussianEquicorr:
    dim: int
    rho: float

    def __post_init__(self):
        _check_dim(self.dim)
        lower = -1.0 / (self.dim - 1) if self.dim > 1 else -1.0
        if not lower < self.rho < 1.0:
            raise ValueError(f"equicorrelation must be in ({lower:g}, 1), got {self.rho}")

    def _sample(self, n, rng):
        d = self.dim
        corr = np.full((d, d), self.rho)
        np.fill_diagonal(corr, 1.0)
        chol = np.linalg.cholesky(corr)
        z = rng.standard_normal((n, d)) @ chol.T
        return ndtr(z)


@dataclass(frozen=True)
class BlockProduct:
    """Independent blocks side by side; block ``i`` covers the next ``blocks[i].dim`` coordinates."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("need at least one block")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    @property
    def offsets(self) -> list[int]:
        return list(np.cumsum([0] + [b.dim for b in self.blocks]))

    def _sample(self, n, rng):
        return np.hstack([_draw(b, n, rng) for b in self.blocks])


def comonotone_block_product(comonotone_dim: int, rest) -> BlockProduct:
    """``M(u_1..u_g) * C(rest)``; ``rest`` is a spec or an integer (independent coordinates)."""
    if isinstance(rest, int):
        rest = Independence(rest)
    return BlockProduct((Comonotone(comonotone_dim), rest))


def _sample_polynomial(spec: PolynomialCopula, n: int, rng) -> np.ndarray:
    bound = spec.density_bound()
    out = []
    have = 0
    batch = max(1024, int(1.2 * n * bound))
    while have < n:
        cand = rng.random((batch, spec.dim))
        dens = spec.density(cand)
        if dens.max() > bound:
            raise RuntimeError(f"{spec.name}: density {dens.max():.4g} exceeds rejection bound {bound:.4g}")
        if dens.min() < -1e-12:
            raise RuntimeError(f"{spec.name}: negative density {dens.min():.4g}; not a copula")
        keep = cand[rng.random(batch) * bound < dens]
        out.append(keep)
        have += len(keep)
    return np.vstack(out)[:n]


def _draw(spec, n, rng):
    if isinstance(spec, PolynomialCopula):
        return _sample_polynomial(spec, n, rng)
    return spec._sample(n, rng)


def sample(spec, n: int, seed=None) -> np.ndarray:
    """``n`` i.i.d. rows from ``spec``; ``seed`` is an int, SeedSequence or Generator."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return _draw(spec, int(n), rng)
