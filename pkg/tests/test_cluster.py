import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from copula_cluster.cluster import DissimilaritySpec, GlobalProvider, LinkageProvider, agglomerate, run_clustering
from copula_cluster.core import DataMatrix, cut_dendrogram, to_pseudo_observations
from copula_cluster.linkage import LinkageMethod, linkage_dissimilarity

D4 = np.array(
    [
        [0.0, 0.1, 0.4, 0.5],
        [0.1, 0.0, 0.3, 0.6],
        [0.4, 0.3, 0.0, 0.2],
        [0.5, 0.6, 0.2, 0.0],
    ]
)


def test_linkage_compositions():
    assert linkage_dissimilarity(D4, (0, 1), (2, 3), "single") == 0.3
    assert linkage_dissimilarity(D4, (0, 1), (2, 3), "complete") == 0.6
    assert linkage_dissimilarity(D4, (0, 1), (2, 3), "average") == pytest.approx(0.45)
    with pytest.raises(ValueError):
        linkage_dissimilarity(D4, (0, 1), (1,), "single")
    with pytest.raises(ValueError):
        LinkageMethod("ward")


def test_agglomerate_known_tree():
    d = agglomerate(LinkageProvider(D4, "single"), 4, list("abcd"))
    assert [(r.left, r.right, r.height) for r in d.merges] == [(0, 1, 0.1), (2, 3, 0.2), (4, 5, 0.3)]


def test_tie_break_lexicographic():
    D = np.ones((4, 4)) - np.eye(4)
    d = agglomerate(LinkageProvider(D, "average"), 4)
    assert [(r.left, r.right) for r in d.merges] == [(0, 1), (2, 3), (4, 5)]


def test_cache_scores_each_pair_once():
    calls = []

    def provider(a, b):
        calls.append((a, b))
        return linkage_dissimilarity(D4, a, b, "average")

    agglomerate(provider, 4)
    assert len(calls) == len(set(calls))
    # 6 initial pairs, then 2 new pairs, then 1
    assert len(calls) == 9


def test_nan_rejected():
    with pytest.raises(ValueError, match="NaN"):
        agglomerate(lambda a, b: float("nan"), 3)


def test_spec_validation():
    assert DissimilaritySpec("kendall", "GLOBAL").is_global
    assert DissimilaritySpec("beta", "single").label == "single-beta"
    with pytest.raises(ValueError):
        DissimilaritySpec("beta", "ward")


def test_average_linkage_heights_match_scipy(rng):
    from scipy.cluster.hierarchy import linkage as sp_linkage
    from scipy.spatial.distance import squareform

    x = rng.random((50, 6))
    x[:, 1] += x[:, 0]
    x[:, 4] += 2 * x[:, 3]
    P = to_pseudo_observations(DataMatrix(x))
    from copula_cluster.empirical import pairwise_matrix

    D = pairwise_matrix(P, "spearman")
    ours = agglomerate(LinkageProvider(D, "average"), 6).heights
    theirs = sp_linkage(squareform(D, checks=False), method="average")[:, 2]
    np.testing.assert_allclose(ours, theirs, atol=1e-12)


def test_global_provider_argument_order(rng):
    P = to_pseudo_observations(DataMatrix(rng.random((30, 3))))
    g = GlobalProvider(P, "kendall")
    assert g((0,), (1, 2)) == g((1, 2), (0,))


def test_run_clustering_recovers_blocks(rng):
    z = rng.normal(size=(300, 2))
    noise = rng.normal(size=(300, 6)) * 0.4
    x = np.column_stack([z[:, [0]] + noise[:, :3], z[:, [1]] + noise[:, 3:]])
    for mode in ("single", "average", "complete", "global"):
        d = run_clustering(x, DissimilaritySpec("kendall", mode))
        assert cut_dendrogram(d, 2).labels == (1, 1, 1, 2, 2, 2)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["single", "average", "complete"]))
def test_linkage_heights_monotone(seed, method):
    # single/average/complete of a fixed matrix are reducible, hence no inversions
    rng = np.random.default_rng(seed)
    A = rng.random((6, 6))
    D = (A + A.T) / 2
    np.fill_diagonal(D, 0)
    h = agglomerate(LinkageProvider(D, method), 6).heights
    assert np.all(np.diff(h) >= -1e-12)
