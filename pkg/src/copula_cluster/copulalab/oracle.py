"""Monte-Carlo oracle: sample a spec, run the empirical estimator, report a batch-means error."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import PseudoObsMatrix
from ..empirical import ColumnsLike, Measure, MeasureKind, column_set, dissimilarity
from .families import sample

__all__ = ["OracleEstimate", "mc_oracle", "kendall_companion_estimate"]

# above this many rows the O(n^2) Kendall count runs per batch only
KENDALL_FULL_LIMIT = 20_000


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    stderr: float
    n: int
    batch_values: tuple[float, ...]

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr


def mc_oracle(spec, A: ColumnsLike, B: ColumnsLike, kind, n: int, seed=None, batches: int = 20) -> OracleEstimate:
    """Estimate ``d(A, B)`` from ``n`` draws of ``spec``.

    The sample is cut into ``batches`` equal consecutive batches; the standard error is
    ``sd(batch estimates) / sqrt(batches)``. The reported value is the full-sample
    estimate, except for Kendall with ``n > KENDALL_FULL_LIMIT`` where it is the
    batch mean. For the tail measure the batch estimates use the batch size in the
    default threshold, so their spread is only a rough guide.
    """
    kind = MeasureKind.parse(kind)
    a, b = column_set(A, spec.dim), column_set(B, spec.dim)
    if batches < 2:
        raise ValueError("need at least 2 batches for a standard error")
    size = n // batches
    if size < 2:
        raise ValueError(f"n={n} is too small for {batches} batches")
    x = sample(spec, size * batches, seed)

    def estimate(rows):
        return dissimilarity(PseudoObsMatrix.from_uniforms(rows), a, b, kind)

    values = np.array([estimate(x[i * size:(i + 1) * size]) for i in range(batches)])
    stderr = float(values.std(ddof=1) / np.sqrt(batches))
    if kind.measure is Measure.KENDALL and len(x) > KENDALL_FULL_LIMIT:
        value = float(values.mean())
    else:
        value = float(estimate(x))
    return OracleEstimate(value, stderr, len(x), tuple(float(v) for v in values))


def kendall_companion_estimate(est: OracleEstimate, dim: int) -> OracleEstimate:
    """Map a Kendall dissimilarity estimate on ``dim`` columns to ``kappa = 1 - d / (1/2 - 1/2^dim)``."""
    scale = 0.5 - 0.5 ** dim
    return OracleEstimate(
        1.0 - est.value / scale,
        est.stderr / scale,
        est.n,
        tuple(1.0 - v / scale for v in est.batch_values),
    )
