"""Agglomerative hierarchical clustering of variables.

Two ways to score a pair of clusters:

* :class:`LinkageProvider` composes a precomputed pairwise matrix
  (single / average / complete), so only bivariate margins matter;
* :class:`GlobalProvider` re-estimates the multivariate functional on the
  union of the two column sets, so higher-order dependence can show up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .core import DataMatrix, Dendrogram, MergeRecord, PseudoObsMatrix, to_pseudo_observations
from .empirical import ColumnSet, MeasureKind, dissimilarity, pairwise_matrix
from .linkage import LinkageMethod, linkage_dissimilarity

__all__ = [
    "DissimilarityProvider",
    "LinkageProvider",
    "GlobalProvider",
    "DissimilaritySpec",
    "agglomerate",
    "run_clustering",
]

GLOBAL = "global"


class DissimilarityProvider(Protocol):
    def __call__(self, A: ColumnSet, B: ColumnSet) -> float: ...


class LinkageProvider:
    def __init__(self, D, method):
        self.D = np.asarray(D, dtype=float)
        self.method = LinkageMethod(method)

    def __call__(self, A: ColumnSet, B: ColumnSet) -> float:
        return linkage_dissimilarity(self.D, A, B, self.method)


class GlobalProvider:
    def __init__(self, P: PseudoObsMatrix, kind):
        self.P = P
        self.kind = MeasureKind.parse(kind)

    def __call__(self, A: ColumnSet, B: ColumnSet) -> float:
        # the measures are symmetric; fixing the argument order keeps the value bit-stable
        if A > B:
            A, B = B, A
        return dissimilarity(self.P, A, B, self.kind)


@dataclass(frozen=True)
class DissimilaritySpec:
    """Measure plus composition: ``mode`` is a linkage method name or ``"global"``."""

    kind: MeasureKind
    mode: str = "average"

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasureKind.parse(self.kind))
        mode = str(self.mode).lower()
        if mode != GLOBAL:
            mode = LinkageMethod(mode).value
        object.__setattr__(self, "mode", mode)

    @property
    def is_global(self) -> bool:
        return self.mode == GLOBAL

    @property
    def label(self) -> str:
        return f"{self.mode}-{self.kind.measure.value}"


def agglomerate(
    provider: Callable[[ColumnSet, ColumnSet], float],
    m: int,
    leaf_names=None,
) -> Dendrogram:
    """Repeatedly merge the closest pair of active clusters until one remains.

    Ties on the dissimilarity go to the lexicographically smallest
    ``(smaller id, larger id)`` pair. Pair values are cached, so each pair of
    member sets is scored once; the merge height is the value that won.
    """
    if m < 2:
        raise ValueError(f"need at least 2 leaves, got {m}")
    names = tuple(leaf_names) if leaf_names is not None else tuple(f"X{j + 1}" for j in range(m))
    active: dict[int, ColumnSet] = {i: (i,) for i in range(m)}
    cache: dict[tuple[ColumnSet, ColumnSet], float] = {}
    merges = []
    for step in range(m - 1):
        ids = sorted(active)
        best = None
        for ia, a in enumerate(ids):
            for b in ids[ia + 1:]:
                key = (active[a], active[b])
                value = cache.get(key)
                if value is None:
                    value = float(provider(active[a], active[b]))
                    if math.isnan(value):
                        raise ValueError(f"provider returned NaN for {key}")
                    cache[key] = value
                if best is None or value < best[0]:
                    best = (value, a, b)
        height, a, b = best
        new_id = m + step
        members = tuple(sorted(active.pop(a) + active.pop(b)))
        active[new_id] = members
        merges.append(MergeRecord(a, b, height, new_id, members))
    return Dendrogram(tuple(merges), names)


def make_provider(P: PseudoObsMatrix, spec: DissimilaritySpec):
    if spec.is_global:
        return GlobalProvider(P, spec.kind)
    return LinkageProvider(pairwise_matrix(P, spec.kind), spec.mode)


def run_clustering(data, spec: DissimilaritySpec) -> Dendrogram:
    """Rank-transform ``data`` and cluster its columns under ``spec``."""
    if isinstance(data, PseudoObsMatrix):
        P = data
    else:
        P = to_pseudo_observations(data if isinstance(data, DataMatrix) else DataMatrix(data))
    return agglomerate(make_provider(P, spec), P.m, P.column_names)
