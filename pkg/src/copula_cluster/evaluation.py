"""Rand and adjusted Rand indices between two partitions of the same items."""
from __future__ import annotations

import warnings
from collections import Counter
from math import comb
from typing import Sequence

from .core import Partition

__all__ = ["rand_index", "adjusted_rand_index", "DegenerateARIWarning"]


class DegenerateARIWarning(UserWarning):
    """Expected index equals the maximum index; ARI is reported as 0."""


def _labels(p) -> tuple:
    return p.labels if isinstance(p, Partition) else tuple(p)


def _pair_counts(p, q):
    x, y = _labels(p), _labels(q)
    if len(x) != len(y):
        raise ValueError(f"partitions have different lengths ({len(x)} vs {len(y)})")
    if len(x) < 2:
        raise ValueError("need at least two items to compare partitions")
    cells = Counter(zip(x, y))
    same_both = sum(comb(c, 2) for c in cells.values())
    same_p = sum(comb(c, 2) for c in Counter(x).values())
    same_q = sum(comb(c, 2) for c in Counter(y).values())
    return same_both, same_p, same_q, comb(len(x), 2)


def rand_index(p: Partition | Sequence, q: Partition | Sequence) -> float:
    """Fraction of item pairs on which the two partitions agree."""
    same_both, same_p, same_q, total = _pair_counts(p, q)
    # pairs split by both = total - (together in p or q)
    apart_both = total - same_p - same_q + same_both
    return (same_both + apart_both) / total


def adjusted_rand_index(p: Partition | Sequence, q: Partition | Sequence) -> float:
    """Hubert-Arabie ARI.

    When both partitions are all-singletons or both are one block, the index is
    undefined (0/0); this returns 0.0 and emits :class:`DegenerateARIWarning`.
    """
    same_both, same_p, same_q, total = _pair_counts(p, q)
    expected = same_p * same_q / total
    maximum = 0.5 * (same_p + same_q)
    if maximum == expected:
        warnings.warn("degenerate ARI denominator, returning 0", DegenerateARIWarning, stacklevel=2)
        return 0.0
    return (same_both - expected) / (maximum - expected)
