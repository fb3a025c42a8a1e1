"""Single, average and complete compositions of a pairwise dissimilarity matrix."""
from __future__ import annotations

import enum

import numpy as np

from .empirical import ColumnsLike, column_set

__all__ = ["LinkageMethod", "linkage_dissimilarity"]


class LinkageMethod(str, enum.Enum):
    SINGLE = "single"
    AVERAGE = "average"
    COMPLETE = "complete"


def linkage_dissimilarity(D, A: ColumnsLike, B: ColumnsLike, method) -> float:
    """Min, mean or max of ``D[a, b]`` over ``a`` in ``A`` and ``b`` in ``B``.

    Only the bivariate entries of ``D`` enter, so the composition cannot see
    any dependence beyond pairs.
    """
    D = np.asarray(D, dtype=float)
    method = LinkageMethod(method)
    m = D.shape[0]
    a, b = column_set(A, m), column_set(B, m)
    if set(a) & set(b):
        raise ValueError(f"column sets overlap on {sorted(set(a) & set(b))}")
    block = D[np.ix_(a, b)]
    if method is LinkageMethod.SINGLE:
        return float(block.min())
    if method is LinkageMethod.COMPLETE:
        return float(block.max())
    return float(block.sum() / (len(a) * len(b)))
