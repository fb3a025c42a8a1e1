import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.metrics import adjusted_rand_score, rand_score

from copula_cluster.core import Partition
from copula_cluster.evaluation import DegenerateARIWarning, adjusted_rand_index, rand_index

labels = st.lists(st.integers(1, 4), min_size=2, max_size=30)


def test_rand_fixtures():
    assert rand_index((1, 1, 2, 2), (1, 1, 2, 2)) == 1.0
    assert rand_index((1, 2, 3, 4), (1, 1, 1, 1)) == 0.0
    # pairs: 12 agree-apart? (1,2): same in p, apart in q ... 3 of 6 agree
    assert rand_index((1, 1, 2, 2), (1, 2, 2, 2)) == 0.5


def test_ari_fixture_by_hand():
    # contingency [[1,1],[0,2]]: index 1, expected (2*3)/6 = 1, so ARI = 0
    assert adjusted_rand_index(Partition((1, 1, 2, 2)), Partition((1, 2, 2, 2))) == 0.0


def test_identity_and_permutation():
    p = (1, 1, 2, 2, 3)
    assert adjusted_rand_index(p, p) == 1.0
    assert adjusted_rand_index(p, (3, 3, 1, 1, 2)) == 1.0


def test_degenerate_warns():
    with pytest.warns(DegenerateARIWarning):
        assert adjusted_rand_index((1, 2, 3), (1, 2, 3)) == 0.0
    with pytest.warns(DegenerateARIWarning):
        assert adjusted_rand_index((1, 1, 1), (2, 2, 2)) == 0.0


def test_errors():
    with pytest.raises(ValueError):
        rand_index((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        adjusted_rand_index((1,), (1,))


@given(labels, st.randoms())
def test_matches_sklearn_and_relabel_invariant(p, rnd):
    q = [rnd.randint(1, 3) for _ in p]
    assert rand_index(p, q) == pytest.approx(rand_score(p, q), abs=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateARIWarning)
        ours = adjusted_rand_index(p, q)
        perm = {1: "c", 2: "a", 3: "b", 4: "d"}
        assert adjusted_rand_index([perm[x] for x in p], q) == ours
    if not (len(set(p)) in (1, len(p)) and len(set(q)) in (1, len(q))):
        assert ours == pytest.approx(adjusted_rand_score(p, q), abs=1e-12)


@given(labels, labels)
def test_one_iff_same_partition(p, q):
    n = min(len(p), len(q))
    p, q = p[:n], q[:n]
    same = Partition.from_labels(p) == Partition.from_labels(q)
    assert (rand_index(p, q) == 1.0) == same


def test_random_partitions_mean_zero():
    rng = np.random.default_rng(0)
    vals = [adjusted_rand_index(rng.integers(1, 4, 30), rng.integers(1, 4, 30)) for _ in range(200)]
    assert abs(np.mean(vals)) <= 0.05
