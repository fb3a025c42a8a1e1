"""Polynomial copulas written as sums of separable terms.

A copula is stored as ``C(u) = sum_t c_t * prod_j p_tj(u_j)`` where every
``p_tj`` is a univariate polynomial (coefficients low to high, numpy
convention). Margins, the density, the diagonal and all integrals needed by
the exact dissimilarities stay inside this representation, so everything is
computed from finite sums of monomial integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "PolynomialCopula",
    "independence_polynomial",
    "fgm3",
    "pairwise_independent_perturbation",
    "asymmetric_perturbation",
    "four_way_perturbation",
    "negative_fgm_pair",
]

_U = (0.0, 1.0)  # p(u) = u
_ONE_MINUS_U = (1.0, -1.0)


def _poly(*factors) -> tuple[float, ...]:
    """Product of coefficient tuples."""
    out = reduce(npoly.polymul, [np.asarray(f, dtype=float) for f in factors], np.array([1.0]))
    return tuple(float(c) for c in np.trim_zeros(out, "b")) or (0.0,)


def _integral01(p) -> float:
    """Integral of ``p`` over [0, 1]."""
    return float(sum(c / (i + 1) for i, c in enumerate(p)))


@dataclass(frozen=True)
class PolynomialCopula:
    dim: int
    terms: tuple[tuple[float, tuple[tuple[float, ...], ...]], ...]
    name: str = "polynomial"

    def __post_init__(self):
        terms = []
        for coef, factors in self.terms:
            factors = tuple(tuple(float(c) for c in f) for f in factors)
            if len(factors) != self.dim:
                raise ValueError(f"term has {len(factors)} factors, copula has dimension {self.dim}")
            terms.append((float(coef), factors))
        object.__setattr__(self, "terms", tuple(terms))

    def __repr__(self):
        return f"{self.name}(dim={self.dim}, terms={len(self.terms)})"

    def _eval(self, u: np.ndarray, derivative: bool) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if u.shape[1] != self.dim:
            raise ValueError(f"points have {u.shape[1]} coordinates, copula has {self.dim}")
        out = np.zeros(u.shape[0])
        for coef, factors in self.terms:
            acc = np.full(u.shape[0], coef)
            for j, p in enumerate(factors):
                q = npoly.polyder(p) if derivative else p
                acc *= npoly.polyval(u[:, j], q)
            out += acc
        return out

    def cdf(self, u) -> np.ndarray:
        return self._eval(u, derivative=False)

    def density(self, u) -> np.ndarray:
        return self._eval(u, derivative=True)

    def margin(self, cols: Sequence[int]) -> "PolynomialCopula":
        """Set every coordinate outside ``cols`` to 1."""
        cols = list(cols)
        keep = set(cols)
        terms = []
        for coef, factors in self.terms:
            c = coef
            for j, p in enumerate(factors):
                if j not in keep:
                    c *= float(sum(p))
            if c != 0.0:
                terms.append((c, tuple(factors[j] for j in cols)))
        return PolynomialCopula(len(cols), tuple(terms), f"margin[{self.name}]")

    def diagonal(self) -> np.ndarray:
        """Coefficients of ``u -> C(u, ..., u)``."""
        out = np.zeros(1)
        for coef, factors in self.terms:
            out = npoly.polyadd(out, coef * np.asarray(_poly(*factors)))
        return out

    def integral(self) -> float:
        """``int C d(lambda^d) = [C, Pi]``."""
        return float(sum(coef * np.prod([_integral01(p) for p in factors]) for coef, factors in self.terms))

    def self_biconvex(self) -> float:
        """``[C, C] = int C dC`` using the polynomial density."""
        total = 0.0
        for (c1, f1), (c2, f2) in product(self.terms, repeat=2):
            val = c1 * c2
            for p, q in zip(f1, f2):
                val *= _integral01(npoly.polymul(p, npoly.polyder(q)))
                if val == 0.0:
                    break
            total += val
        return total

    def validation_points(self, per_axis: int = 33) -> np.ndarray:
        """Grid of ``per_axis**min(d, 4)`` points; beyond 4 dimensions a Halton set of the same size."""
        from scipy.stats import qmc

        axis = (np.arange(per_axis) + 0.5) / per_axis
        axis = np.concatenate([[0.0], axis, [1.0]])
        if self.dim <= 4:
            mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
            return np.column_stack([g.ravel() for g in mesh])
        return qmc.Halton(self.dim, seed=0).random(per_axis ** 4)

    def density_bound(self, safety: float = 1.25) -> float:
        """Grid maximum of the density times ``safety``; raises if the density is negative."""
        pts = self.validation_points()
        dens = np.concatenate([self.density(chunk) for chunk in np.array_split(pts, max(1, len(pts) // 200_000))])
        if dens.min() < -1e-12:
            raise ValueError(f"{self.name}: density is negative ({dens.min():.4g}) on the validation grid")
        return float(dens.max() * safety)


def _term(coef, *factors):
    return (coef, tuple(tuple(f) for f in factors))


def independence_polynomial(dim: int) -> PolynomialCopula:
    return PolynomialCopula(dim, (_term(1.0, *([_U] * dim)),), f"Pi{dim}")


def fgm3(theta: float) -> PolynomialCopula:
    """Trivariate FGM copula ``u1 u2 u3 (1 + theta (1-u1)(1-u2)(1-u3))``.

    Only the three-way term is perturbed, so all bivariate margins are
    independent; this is a copula for ``theta`` in [-1, 1].
    """
    if not -1.0 <= theta <= 1.0:
        raise ValueError(f"FGM3 needs theta in [-1, 1], got {theta}")
    g = _poly(_U, _ONE_MINUS_U)
    return PolynomialCopula(3, (_term(1.0, _U, _U, _U), _term(theta, g, g, g)), f"FGM3({theta:g})")


def pairwise_independent_perturbation(dim: int) -> PolynomialCopula:
    """``Pi(u) + prod_i u_i (1 - u_i)``: differs from Pi, but every bivariate margin is Pi (dim >= 3)."""
    if dim < 3:
        raise ValueError("dimension must be at least 3")
    g = _poly(_U, _ONE_MINUS_U)
    return PolynomialCopula(dim, (_term(1.0, *([_U] * dim)), _term(1.0, *([g] * dim))), f"PiPlusBump{dim}")


def asymmetric_perturbation(dim: int = 3) -> PolynomialCopula:
    """``Pi(u) - 1/3 [(1-u1)(1-u2) + (1-u1)(1-u3) + (1-u2)(1-u3)] u1^3 u2^2 u3 prod_{i>3} u_i``.

    Margins and grounding are those of a copula, but the density drops to -1
    at ``(1, 1, 1)``: the function is not 2-increasing near that corner. Its
    point values (hence the exact beta dissimilarities) are still well defined;
    sampling it raises.
    """
    if dim < 3:
        raise ValueError("dimension must be at least 3")
    base = [_poly(_U, _U, _U), _poly(_U, _U), _U]
    rest = [_U] * (dim - 3)
    terms = [_term(1.0, *([_U] * dim))]
    for pair in ((0, 1), (0, 2), (1, 2)):
        fs = [_poly(base[i], _ONE_MINUS_U) if i in pair else base[i] for i in range(3)]
        terms.append(_term(-1.0 / 3.0, *fs, *rest))
    return PolynomialCopula(dim, tuple(terms), f"AsymPerturbation{dim}")


def four_way_perturbation(dim: int = 4) -> PolynomialCopula:
    """``Pi(u) + prod_i u_i * prod_{i<=4} (1 - u_i)``."""
    if dim < 4:
        raise ValueError("dimension must be at least 4")
    g = _poly(_U, _ONE_MINUS_U)
    factors = [g] * 4 + [_U] * (dim - 4)
    return PolynomialCopula(dim, (_term(1.0, *([_U] * dim)), _term(1.0, *factors)), f"FourWay{dim}")


def negative_fgm_pair(dim: int = 2) -> PolynomialCopula:
    """``prod u_i - 1/2 (1-u1)(1-u2) prod u_i``, a bivariate FGM with theta = -1/2 padded by independent coordinates."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    g = _poly(_U, _ONE_MINUS_U)
    return PolynomialCopula(
        dim,
        (_term(1.0, *([_U] * dim)), _term(-0.5, g, g, *([_U] * (dim - 2)))),
        f"FGMPair{dim}",
    )
