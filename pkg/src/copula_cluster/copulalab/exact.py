"""Exact population values of the dissimilarities for analytically tractable copulas.

The margin of a spec on ``A + B`` is decomposed into independent factors:
comonotone blocks, polynomial copulas and (tail only) Clayton blocks. Each
functional factorises over independent blocks:

* ``C(1/2 1)`` and ``[C, Pi]`` are products of the per-block values,
* ``[C, C]`` is the product of the per-block ``[C_b, C_b]``,
* ``[C, M] = int_0^1 prod_b C_b(u 1) du`` is one univariate polynomial integral,
* the lower tail limit of ``C(u 1)/u`` is the product of the blocks' leading
  coefficients when exactly one block is present, else 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..empirical import ColumnsLike, Measure, MeasureKind, column_set
from .families import BlockProduct, Clayton, Comonotone, Independence
from .polynomial import PolynomialCopula, independence_polynomial

__all__ = ["exact_dissimilarity", "UnsupportedCombination"]


class UnsupportedCombination(ValueError):
    pass


@dataclass(frozen=True)
class _MBlock:
    dim: int


@dataclass(frozen=True)
class _ClaytonBlock:
    dim: int
    theta: float


def _factors(spec, cols: list[int]) -> list:
    if not cols:
        return []
    if isinstance(spec, Independence):
        return [independence_polynomial(len(cols))]
    if isinstance(spec, Comonotone):
        return [_MBlock(len(cols))]
    if isinstance(spec, PolynomialCopula):
        return [spec.margin(cols)]
    if isinstance(spec, Clayton):
        if len(cols) == 1:
            return [independence_polynomial(1)]
        return [_ClaytonBlock(len(cols), spec.theta)]
    if isinstance(spec, BlockProduct):
        out = []
        offsets = spec.offsets
        for block, lo, hi in zip(spec.blocks, offsets[:-1], offsets[1:]):
            out.extend(_factors(block, [c - lo for c in cols if lo <= c < hi]))
        return out
    raise UnsupportedCombination(f"no exact evaluator for {type(spec).__name__}")


def _require_analytic(factors, what):
    for f in factors:
        if isinstance(f, _ClaytonBlock):
            raise UnsupportedCombination(f"{what} is not available in closed form for Clayton blocks")


def _poly_diagonal(f) -> np.ndarray:
    if isinstance(f, _MBlock):
        return np.array([0.0, 1.0])
    return f.diagonal()


def _tail_leading(f) -> tuple[float, int]:
    """``(a, e)`` with ``C_f(u 1) ~ a u^e`` as ``u -> 0``."""
    if isinstance(f, _MBlock):
        return 1.0, 1
    if isinstance(f, _ClaytonBlock):
        return f.dim ** (-1.0 / f.theta), 1
    q = f.diagonal()
    scale = max(1.0, float(np.max(np.abs(q))))
    for power, c in enumerate(q):
        if abs(c) > 1e-14 * scale:
            return float(c), power
    return 0.0, 1


def exact_dissimilarity(spec, A: ColumnsLike, B: ColumnsLike, kind) -> float:
    kind = MeasureKind.parse(kind)
    dim = spec.dim
    a, b = column_set(A, dim), column_set(B, dim)
    if set(a) & set(b):
        raise ValueError(f"column sets overlap on {sorted(set(a) & set(b))}")
    cols = sorted(a + b)
    factors = _factors(spec, cols)
    measure = kind.measure

    if measure is Measure.LTD:
        if kind.tail_k is not None:
            raise UnsupportedCombination("exact tail value is the limit; tail_k does not apply")
        leading = [_tail_leading(f) for f in factors]
        power = sum(e for _, e in leading)
        limit = float(np.prod([c for c, _ in leading])) if power == 1 else 0.0
        return 1.0 - limit

    _require_analytic(factors, measure.value)
    if measure is Measure.BETA:
        half = 1.0
        for f in factors:
            half *= 0.5 if isinstance(f, _MBlock) else float(f.cdf(np.full((1, f.dim), 0.5))[0])
        return 0.5 - half
    if measure is Measure.FOOTRULE:
        diag = np.array([1.0])
        for f in factors:
            diag = npoly.polymul(diag, _poly_diagonal(f))
        return 0.5 - float(sum(c / (i + 1) for i, c in enumerate(diag)))
    if measure is Measure.KENDALL:
        cc = 1.0
        for f in factors:
            cc *= 0.5 if isinstance(f, _MBlock) else f.self_biconvex()
        return 0.5 - cc
    # Spearman
    ci = 1.0
    for f in factors:
        ci *= 1.0 / (f.dim + 1) if isinstance(f, _MBlock) else f.integral()
    return 1.0 / (len(cols) + 1) - ci
