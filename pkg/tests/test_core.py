import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from copula_cluster.core import (
    DataMatrix,
    Dendrogram,
    MergeRecord,
    Partition,
    PseudoObsMatrix,
    cut_dendrogram,
    to_pseudo_observations,
)


def _chain_dendrogram(heights, names=("a", "b", "c", "d")):
    # (((a,b),c),d)
    recs = [MergeRecord(0, 1, heights[0], 4, (0, 1)),
            MergeRecord(4, 2, heights[1], 5, (0, 1, 2)),
            MergeRecord(5, 3, heights[2], 6, (0, 1, 2, 3))]
    return Dendrogram(tuple(recs), names)


class TestDataMatrix:
    def test_defaults_and_readonly(self):
        d = DataMatrix([[1, 2], [3, 4]])
        assert d.column_names == ("X1", "X2")
        assert (d.n, d.m) == (2, 2)
        with pytest.raises(ValueError):
            d.values[0, 0] = 9

    @pytest.mark.parametrize(
        "values",
        [[[1.0, 2.0]], [[1.0], [2.0]], [[1.0, np.nan], [2.0, 3.0]], [1.0, 2.0]],
    )
    def test_rejects_bad_shapes(self, values):
        with pytest.raises(ValueError):
            DataMatrix(values)

    def test_duplicate_names(self):
        with pytest.raises(ValueError):
            DataMatrix([[1, 2], [3, 4]], ("a", "a"))


class TestPseudoObservations:
    def test_ranks_over_n_plus_one(self):
        P = to_pseudo_observations(DataMatrix([[3.0, 1.0], [1.0, 2.0], [2.0, 3.0]]))
        np.testing.assert_array_equal(P.u[:, 0], [0.75, 0.25, 0.5])
        assert not P.has_ties

    def test_mid_ranks_and_tie_flags(self):
        P = to_pseudo_observations(DataMatrix([[1.0, 5.0], [1.0, 6.0], [2.0, 7.0]]))
        np.testing.assert_array_equal(P.u[:, 0], [1.5 / 4, 1.5 / 4, 0.75])
        assert P.tie_flags == (True, False)

    def test_rejects_boundary(self):
        with pytest.raises(ValueError):
            PseudoObsMatrix(np.array([[0.0, 0.5], [0.5, 0.5]]))

    @given(st.integers(2, 40), st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_strictly_inside_and_rank_invariant(self, n, m, seed):
        x = np.random.default_rng(seed).normal(size=(n, m))
        P = to_pseudo_observations(DataMatrix(x))
        assert np.all((P.u > 0) & (P.u < 1))
        Q = to_pseudo_observations(DataMatrix(np.exp(x) * 3 + 1))
        np.testing.assert_array_equal(P.u, Q.u)


class TestDendrogram:
    def test_validates_sequence(self):
        with pytest.raises(ValueError):
            Dendrogram((MergeRecord(0, 1, 0.1, 3, (0, 1)),), ("a", "b", "c"))
        with pytest.raises(ValueError):
            Dendrogram((MergeRecord(0, 0, 0.1, 2, (0,)),), ("a", "b"))

    def test_json_round_trip(self):
        d = _chain_dendrogram([0.1, 0.3, 0.2])
        payload = json.loads(d.to_json())
        assert payload == {
            "leaves": ["a", "b", "c", "d"],
            "merges": [
                {"left": 0, "right": 1, "height": 0.1},
                {"left": 4, "right": 2, "height": 0.3},
                {"left": 5, "right": 3, "height": 0.2},
            ],
        }
        assert Dendrogram.from_json(d.to_json()) == d

    def test_newick_branch_lengths(self):
        d = _chain_dendrogram([0.125, 0.375, 0.5])
        assert d.to_newick() == "(((a:0.125,b:0.125):0.25,c:0.375):0.125,d:0.5);"

    def test_newick_keeps_inversions(self):
        d = _chain_dendrogram([0.25, 0.5, 0.375])
        assert ":-0.125" in d.to_newick()

    def test_newick_quotes_names(self):
        d = Dendrogram((MergeRecord(0, 1, 1.0, 2, (0, 1)),), ("a b", "c"))
        assert d.to_newick() == "('a b':1,c:1);"


class TestPartitionAndCut:
    def test_partition_validation(self):
        with pytest.raises(ValueError):
            Partition((1, 3))
        assert Partition.from_labels("xyxz").labels == (1, 2, 1, 3)
        assert Partition((1, 2, 1)).blocks() == [(0, 2), (1,)]

    def test_cut_levels(self):
        d = _chain_dendrogram([0.1, 0.2, 0.3])
        assert cut_dendrogram(d, 1).labels == (1, 1, 1, 1)
        assert cut_dendrogram(d, 2).labels == (1, 1, 1, 2)
        assert cut_dendrogram(d, 3).labels == (1, 1, 2, 3)
        assert cut_dendrogram(d, 4).labels == (1, 2, 3, 4)
        with pytest.raises(ValueError):
            cut_dendrogram(d, 5)

    def test_cut_labels_follow_smallest_member(self):
        recs = (MergeRecord(1, 2, 0.1, 3, (1, 2)),)
        recs += (MergeRecord(0, 3, 0.2, 4, (0, 1, 2)),)
        d = Dendrogram(recs, ("a", "b", "c"))
        assert cut_dendrogram(d, 2).labels == (1, 2, 2)
