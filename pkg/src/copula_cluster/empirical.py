"""Plug-in estimators of the copula dissimilarities.

Every ``diss_*`` function takes two disjoint column sets and evaluates the
multivariate functional on the empirical copula of their union. With two
singletons this is the pairwise version used by the linkage methods.

Values are raw, i.e. never rescaled across measures.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .core import PseudoObsMatrix

__all__ = [
    "ColumnSet",
    "Measure",
    "MeasureKind",
    "column_set",
    "empirical_copula_at",
    "diss_beta",
    "diss_footrule",
    "diss_kendall",
    "diss_spearman",
    "diss_ltd",
    "dissimilarity",
    "pairwise_matrix",
    "kendall_companion",
    "default_tail_k",
]

ColumnSet = tuple[int, ...]
ColumnsLike = Union[int, Iterable[int]]

# bool cells materialised per chunk in the dominance counts
_CHUNK_CELLS = 1 << 22


class Measure(str, enum.Enum):
    BETA = "beta"
    FOOTRULE = "footrule"
    KENDALL = "kendall"
    SPEARMAN = "spearman"
    LTD = "ltd"


@dataclass(frozen=True)
class MeasureKind:
    """Which functional to estimate; ``tail_k`` only matters for ``Measure.LTD``.

    ``tail_k=None`` means ``floor(sqrt(n))`` at evaluation time.
    """

    measure: Measure
    tail_k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        if self.tail_k is not None:
            if int(self.tail_k) != self.tail_k or self.tail_k < 1:
                raise ValueError(f"tail_k must be a positive integer, got {self.tail_k}")
            object.__setattr__(self, "tail_k", int(self.tail_k))

    @classmethod
    def parse(cls, value: "MeasureKind | Measure | str", tail_k: int | None = None) -> "MeasureKind":
        if isinstance(value, MeasureKind):
            return value
        return cls(Measure(value), tail_k)


def column_set(cols: ColumnsLike, m: int | None = None) -> ColumnSet:
    """Normalise to a sorted tuple of distinct column indices."""
    if isinstance(cols, (int, np.integer)):
        cols = (int(cols),)
    out = tuple(sorted(int(c) for c in cols))
    if not out:
        raise ValueError("column set must be non-empty")
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate column index in {out}")
    if out[0] < 0 or (m is not None and out[-1] >= m):
        raise ValueError(f"column index out of range in {out} (m={m})")
    return out


def _union(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike) -> ColumnSet:
    a, b = column_set(A, P.m), column_set(B, P.m)
    overlap = set(a) & set(b)
    if overlap:
        raise ValueError(f"column sets overlap on {sorted(overlap)}")
    return tuple(sorted(a + b))


def default_tail_k(n: int) -> int:
    return max(1, int(np.floor(np.sqrt(n))))


def empirical_copula_at(P: PseudoObsMatrix, cols: ColumnsLike, point) -> float:
    cols = column_set(cols, P.m)
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if point.shape != (len(cols),):
        raise ValueError(f"point has {point.size} coordinates, column set has {len(cols)}")
    below = np.all(P.u[:, cols] <= point, axis=1)
    return float(np.count_nonzero(below)) / P.n


def diss_beta(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike) -> float:
    """``1/2 - C_n(1/2, ..., 1/2)`` over the columns of ``A`` and ``B``."""
    cols = _union(P, A, B)
    below = np.all(P.u[:, cols] <= 0.5, axis=1)
    return 0.5 - np.count_nonzero(below) / P.n


def diss_footrule(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike) -> float:
    """``1/2 - [C_n, M]``.

    The diagonal of the empirical copula is a step function, so
    ``[C_n, M] = mean_i(1 - max_j u_ij)`` exactly.
    """
    cols = _union(P, A, B)
    return 0.5 - float(np.mean(1.0 - P.u[:, cols].max(axis=1)))


def diss_spearman(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike) -> float:
    """``1/(d+1) - [C_n, Pi]`` with ``[C_n, Pi] = mean_i prod_j (1 - u_ij)``."""
    cols = _union(P, A, B)
    return 1.0 / (len(cols) + 1) - float(np.mean(np.prod(1.0 - P.u[:, cols], axis=1)))


def _dominance_counts(x: np.ndarray, strict: bool) -> int:
    """Number of ordered pairs (i, k), i == k included, with x_k <= x_i (or <) in every coordinate."""
    n, d = x.shape
    chunk = max(1, _CHUNK_CELLS // n)
    total = 0
    for start in range(0, n, chunk):
        blk = x[start:start + chunk]
        if strict:
            dom = x[None, :, 0] < blk[:, None, 0]
            for j in range(1, d):
                dom &= x[None, :, j] < blk[:, None, j]
        else:
            dom = x[None, :, 0] <= blk[:, None, 0]
            for j in range(1, d):
                dom &= x[None, :, j] <= blk[:, None, j]
        total += int(np.count_nonzero(dom))
    return total


def kendall_biconvex(P: PseudoObsMatrix, cols: ColumnSet) -> float:
    """Estimate of ``[C, C]``: mean of the weak and strict dominance frequencies over all n^2 pairs."""
    x = P.u[:, cols]
    n = P.n
    weak = _dominance_counts(x, strict=False)
    if any(P.tie_flags[c] for c in cols):
        strict = _dominance_counts(x, strict=True)
    else:
        # without ties only the diagonal pairs separate the two counts
        strict = weak - n
    return (weak + strict) / (2.0 * n * n)


def diss_kendall(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike) -> float:
    """``1/2 - [C_n, C_n]``; O(n^2 d) time, chunked memory."""
    cols = _union(P, A, B)
    return 0.5 - kendall_biconvex(P, cols)


def diss_ltd(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike, k: int | None = None) -> float:
    """``1 - C_n((k/n) 1) / (k/n)``, clamped into [0, 1].

    ``k`` is the number of lower order statistics used; defaults to ``floor(sqrt(n))``.
    """
    cols = _union(P, A, B)
    n = P.n
    if k is None:
        k = default_tail_k(n)
    if int(k) != k or not 1 <= k <= n:
        raise ValueError(f"tail threshold k must be an integer in [1, {n}], got {k}")
    k = int(k)
    below = np.all(P.u[:, cols] <= k / n, axis=1)
    value = 1.0 - np.count_nonzero(below) / k
    return float(min(1.0, max(0.0, value)))


def dissimilarity(P: PseudoObsMatrix, A: ColumnsLike, B: ColumnsLike, kind) -> float:
    kind = MeasureKind.parse(kind)
    if kind.measure is Measure.BETA:
        return diss_beta(P, A, B)
    if kind.measure is Measure.FOOTRULE:
        return diss_footrule(P, A, B)
    if kind.measure is Measure.KENDALL:
        return diss_kendall(P, A, B)
    if kind.measure is Measure.SPEARMAN:
        return diss_spearman(P, A, B)
    return diss_ltd(P, A, B, kind.tail_k)


def pairwise_matrix(P: PseudoObsMatrix, kind) -> np.ndarray:
    """Matrix of the (1,1)-dissimilarities; exactly symmetric, zero diagonal."""
    kind = MeasureKind.parse(kind)
    m = P.m
    D = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            D[i, j] = D[j, i] = dissimilarity(P, (i,), (j,), kind)
    return D


def kendall_companion(d_tau: float, dim: int) -> float:
    """Normalised multivariate Kendall's tau ``1 - d_tau / ([M,M] - [Pi,Pi])``.

    For reporting only: clustering on this rescaled value can break reducibility.
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    return 1.0 - d_tau / (0.5 - 0.5 ** dim)
