import numpy as np
import pytest

from bal.cdd import (Direction, Metric, ScoringError, cdd_score, cdd_scores,
                     nearest_distance_score, nearest_distance_scores, sort_pool)
from bal.featio import FeatureMatrix


def oracle_two_smallest(f, centroids):
    """Brute force: all squared distances, then the two smallest."""
    d = []
    for c in centroids:
        d.append(np.sum((np.asarray(f, dtype=np.float32).astype(np.float64)
                         - np.asarray(c, dtype=np.float64)) ** 2))
    d.sort()
    return d[0], d[1]


TWO = np.array([[0.0, 0.0], [4.0, 0.0]])


def test_boundary_point_zero():
    assert cdd_score([2.0, 0.0], TWO) == 0.0


def test_two_centroid_example():
    # d1 = 1, d2 = 9
    assert cdd_score([1.0, 0.0], TWO) == pytest.approx(8.0)


def test_scale_homogeneity():
    rng = np.random.default_rng(0)
    centroids = rng.normal(size=(4, 3))
    f = rng.normal(size=3)
    a = cdd_score(f, centroids)
    a2 = cdd_score(2 * f, 2 * centroids)
    assert a2 == pytest.approx(4 * a, rel=1e-6)


def test_needs_two_centroids():
    with pytest.raises(ScoringError):
        cdd_score([1.0, 0.0], np.array([[0.0, 0.0]]))


def test_nearest_distance_basic():
    assert nearest_distance_score([0.0, 0.0], TWO) == 0.0
    assert nearest_distance_score([1.0, 0.0], TWO) == pytest.approx(1.0)
    assert nearest_distance_score([3.0, 4.0], np.array([[0.0, 0.0]])) == pytest.approx(25.0)


def test_nearest_needs_one_centroid():
    with pytest.raises(ScoringError):
        nearest_distance_score([1.0], np.zeros((0, 1)))


@pytest.mark.parametrize("k", [2, 3, 5, 10])
def test_cdd_matches_oracle_bitexact(k):
    rng = np.random.default_rng(k)
    X = rng.normal(size=(100, 6)).astype(np.float32)
    centroids = rng.normal(size=(k, 6))
    fast = cdd_scores(X, centroids)
    for i in range(100):
        d1, d2 = oracle_two_smallest(X[i], centroids)
        assert fast[i] == d2 - d1  # same float64 summation order -> exact


def test_d2_ge_d1_property():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(200, 4)).astype(np.float32)
    centroids = rng.normal(size=(5, 4))
    assert np.all(cdd_scores(X, centroids) >= 0)


def test_centroid_permutation_invariance():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(50, 3)).astype(np.float32)
    centroids = rng.normal(size=(6, 3))
    perm = rng.permutation(6)
    np.testing.assert_array_equal(cdd_scores(X, centroids),
                                  cdd_scores(X, centroids[perm]))


def _pool(scores_arr):
    n = len(scores_arr)
    m = FeatureMatrix(data=np.zeros((n, 2), dtype=np.float32))
    return m


def test_sort_pool_ascending():
    m = FeatureMatrix(data=np.array(
        [[-3, 0], [0, 0], [-1, 0]], dtype=np.float32))
    # centroids at 0 and 4: rows score alpha = d2-d1
    sp = sort_pool(m, TWO)
    scores = sp.scores
    assert list(sp.order) == list(np.argsort(scores, kind="stable"))


def test_sort_pool_explicit_order():
    # engineer alpha = [5, 0, 2] via x positions; centroids 0 and 4
    # alpha(x) = |x-4|^2 - |x|^2 for x < 2 (= 16 - 8x)
    xs = [(16 - 5) / 8, (16 - 0) / 8, (16 - 2) / 8]
    m = FeatureMatrix(data=np.array([[x, 0] for x in xs], dtype=np.float32))
    sp = sort_pool(m, TWO)
    assert list(sp.order) == [1, 2, 0]


def test_sort_pool_stable_on_ties():
    m = FeatureMatrix(data=np.array([[2, 0]] * 3, dtype=np.float32))
    sp = sort_pool(m, TWO)
    assert list(sp.order) == [0, 1, 2]


def test_sort_pool_descending():
    rng = np.random.default_rng(4)
    m = FeatureMatrix(data=rng.normal(size=(30, 2)).astype(np.float32))
    sp = sort_pool(m, TWO, direction=Direction.DESCENDING)
    ordered = sp.scores[sp.order]
    assert all(a >= b for a, b in zip(ordered, ordered[1:]))


def test_sort_matches_reference_sort():
    rng = np.random.default_rng(5)
    m = FeatureMatrix(data=rng.normal(size=(200, 4)).astype(np.float32))
    centroids = rng.normal(size=(4, 4))
    sp = sort_pool(m, centroids)
    ref_scores = [oracle_two_smallest(m.data[i], centroids) for i in range(200)]
    ref_alpha = [d2 - d1 for d1, d2 in ref_scores]
    ref_order = sorted(range(200), key=lambda i: (ref_alpha[i], i))
    assert list(sp.order) == ref_order


def test_scaling_preserves_order():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(100, 3)).astype(np.float32)
    centroids = rng.normal(size=(5, 3))
    m1 = FeatureMatrix(data=X)
    m2 = FeatureMatrix(data=2 * X)  # power-of-two scale is exact in float32
    sp1 = sort_pool(m1, centroids)
    sp2 = sort_pool(m2, 2 * centroids)
    assert list(sp1.order) == list(sp2.order)
    np.testing.assert_allclose(sp2.scores, 4 * sp1.scores, rtol=1e-12)


def test_nearest_metric_sorting():
    rng = np.random.default_rng(7)
    m = FeatureMatrix(data=rng.normal(size=(40, 2)).astype(np.float32))
    sp = sort_pool(m, TWO, metric=Metric.NEAREST_DISTANCE)
    np.testing.assert_array_equal(sp.scores, nearest_distance_scores(m.data, TWO))
