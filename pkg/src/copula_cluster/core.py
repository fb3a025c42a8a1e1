"""Data model shared by the estimators, the clustering engine and the CLI.

Rows are observations, columns are variables. Everything downstream works on
pseudo-observations (normalized mid-ranks), so the whole toolchain only sees
the data through its ranks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

__all__ = [
    "DataMatrix",
    "PseudoObsMatrix",
    "MergeRecord",
    "Dendrogram",
    "Partition",
    "to_pseudo_observations",
    "cut_dendrogram",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DataMatrix:
    values: np.ndarray
    column_names: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {values.shape}")
        n, m = values.shape
        if n < 2:
            raise ValueError(f"need at least 2 observations, got {n}")
        if m < 2:
            raise ValueError(f"need at least 2 variables, got {m}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        names = tuple(self.column_names) or tuple(f"X{j + 1}" for j in range(m))
        if len(names) != m:
            raise ValueError(f"{len(names)} column names for {m} columns")
        if len(set(names)) != m:
            raise ValueError("column names must be unique")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PseudoObsMatrix:
    """Column-wise ranks scaled by ``1/(n+1)``, hence strictly inside (0, 1)."""

    u: np.ndarray
    tie_flags: tuple[bool, ...] = ()
    column_names: tuple[str, ...] = ()

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {u.shape}")
        if np.any(u <= 0.0) or np.any(u >= 1.0):
            raise ValueError("pseudo-observations must lie strictly inside (0, 1)")
        m = u.shape[1]
        flags = tuple(bool(f) for f in self.tie_flags) or (False,) * m
        names = tuple(self.column_names) or tuple(f"X{j + 1}" for j in range(m))
        if len(flags) != m or len(names) != m:
            raise ValueError("tie_flags / column_names do not match the column count")
        object.__setattr__(self, "u", _readonly(u))
        object.__setattr__(self, "tie_flags", flags)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.u.shape[1]

    @property
    def has_ties(self) -> bool:
        return any(self.tie_flags)

    @classmethod
    def from_uniforms(cls, sample: np.ndarray, column_names: Sequence[str] = ()) -> "PseudoObsMatrix":
        """Rank-transform a sample that already lives on the unit cube."""
        return to_pseudo_observations(DataMatrix(sample, tuple(column_names)))


def to_pseudo_observations(data: DataMatrix) -> PseudoObsMatrix:
    """Mid-ranks over ``n + 1``.

    Ties get averaged ranks and set the column's tie flag.

    >>> to_pseudo_observations(DataMatrix([[3.0, 1.0], [1.0, 2.0], [2.0, 3.0]])).u[:, 0]
    array([0.75, 0.25, 0.5 ])
    """
    if not isinstance(data, DataMatrix):
        data = DataMatrix(data)
    x = data.values
    ranks = rankdata(x, method="average", axis=0)
    flags = []
    for j in range(data.m):
        col = np.sort(x[:, j])
        flags.append(bool(np.any(col[1:] == col[:-1])))
    return PseudoObsMatrix(ranks / (data.n + 1), tuple(flags), data.column_names)


@dataclass(frozen=True)
class MergeRecord:
    left: int
    right: int
    height: float
    new_id: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class Dendrogram:
    """Merge history of an agglomerative run.

    Cluster ids follow the usual convention: leaves are ``0..m-1`` and the
    k-th merge creates id ``m + k``. Heights are stored as computed and may
    decrease from one merge to the next.
    """

    merges: tuple[MergeRecord, ...]
    leaf_names: tuple[str, ...]

    def __post_init__(self):
        merges = tuple(self.merges)
        names = tuple(self.leaf_names)
        m = len(names)
        if len(merges) != m - 1:
            raise ValueError(f"{m} leaves need {m - 1} merges, got {len(merges)}")
        members = {i: (i,) for i in range(m)}
        for k, rec in enumerate(merges):
            if rec.new_id != m + k:
                raise ValueError(f"merge {k} creates id {rec.new_id}, expected {m + k}")
            if rec.left not in members or rec.right not in members or rec.left == rec.right:
                raise ValueError(f"merge {k} refers to inactive cluster ids {rec.left}, {rec.right}")
            union = tuple(sorted(members.pop(rec.left) + members.pop(rec.right)))
            if union != tuple(rec.members):
                raise ValueError(f"merge {k} members {rec.members} != {union}")
            members[rec.new_id] = union
        object.__setattr__(self, "merges", merges)
        object.__setattr__(self, "leaf_names", names)

    @property
    def m(self) -> int:
        return len(self.leaf_names)

    @property
    def heights(self) -> np.ndarray:
        return np.array([rec.height for rec in self.merges])

    def members_of(self, cluster_id: int) -> tuple[int, ...]:
        if cluster_id < self.m:
            return (cluster_id,)
        return self.merges[cluster_id - self.m].members

    def to_dict(self) -> dict:
        return {
            "leaves": list(self.leaf_names),
            "merges": [
                {"left": rec.left, "right": rec.right, "height": rec.height}
                for rec in self.merges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, payload: dict) -> "Dendrogram":
        leaves = tuple(payload["leaves"])
        m = len(leaves)
        members = {i: (i,) for i in range(m)}
        merges = []
        for k, item in enumerate(payload["merges"]):
            left, right = int(item["left"]), int(item["right"])
            union = tuple(sorted(members[left] + members[right]))
            members[m + k] = union
            merges.append(MergeRecord(left, right, float(item["height"]), m + k, union))
        return cls(tuple(merges), leaves)

    @classmethod
    def from_json(cls, text: str) -> "Dendrogram":
        return cls.from_dict(json.loads(text))

    def to_newick(self, digits: int = 9) -> str:
        """Newick string; a node's branch length is its parent's height minus its own.

        Leaves sit at height 0. Inverted merges therefore show up as negative
        branch lengths instead of being silently corrected.
        """
        m = self.m
        height = {i: 0.0 for i in range(m)}
        text = {i: _newick_name(name) for i, name in enumerate(self.leaf_names)}
        for rec in self.merges:
            height[rec.new_id] = rec.height
            parts = [
                f"{text[child]}:{rec.height - height[child]:.{digits}g}"
                for child in (rec.left, rec.right)
            ]
            text[rec.new_id] = "(" + ",".join(parts) + ")"
        root = 2 * m - 2
        return text[root] + ";"


def _newick_name(name: str) -> str:
    if any(ch in name for ch in " ,:;()[]'\t\n"):
        return "'" + name.replace("'", "''") + "'"
    return name


@dataclass(frozen=True)
class Partition:
    """Cluster labels ``1..k`` for ``m`` items (every label used)."""

    labels: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        if not labels:
            raise ValueError("empty partition")
        k = max(labels)
        if set(labels) != set(range(1, k + 1)):
            raise ValueError(f"labels must cover 1..{k} exactly, got {sorted(set(labels))}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Relabel arbitrary hashable labels to ``1..k`` by first appearance."""
        mapping: dict = {}
        out = []
        for lab in labels:
            if lab not in mapping:
                mapping[lab] = len(mapping) + 1
            out.append(mapping[lab])
        return cls(tuple(out))

    @property
    def k(self) -> int:
        return max(self.labels)

    @property
    def m(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def blocks(self) -> list[tuple[int, ...]]:
        return [
            tuple(i for i, lab in enumerate(self.labels) if lab == c)
            for c in range(1, self.k + 1)
        ]


def cut_dendrogram(d: Dendrogram, k: int) -> Partition:
    """Undo the last ``k - 1`` merges (by merge order, not height).

    Clusters are numbered 1..k in order of their smallest member.
    """
    m = d.m
    if not 1 <= k <= m:
        raise ValueError(f"k must be in [1, {m}], got {k}")
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for rec in d.merges[: m - k]:
        root_a = find(d.members_of(rec.left)[0])
        root_b = find(d.members_of(rec.right)[0])
        parent[max(root_a, root_b)] = min(root_a, root_b)

    labels = [0] * m
    next_label = 0
    seen: dict[int, int] = {}
    for i in range(m):
        r = find(i)
        if r not in seen:
            next_label += 1
            seen[r] = next_label
        labels[i] = seen[r]
    return Partition(tuple(labels))
