import numpy as np
import pytest

from bal.clustering import ClusteringError, assign, kmeans_fit
from bal.featio import FeatureMatrix


def fm(arr):
    return FeatureMatrix(data=np.asarray(arr, dtype=np.float32))


def test_k_equals_n_corners():
    corners = fm([[0, 0], [0, 1], [1, 0], [1, 1]])
    clus = kmeans_fit(corners, k=4, seed=0)
    assert clus.inertia == pytest.approx(0.0, abs=1e-12)
    assert sorted(map(tuple, clus.centroids.tolist())) == \
        sorted(map(tuple, corners.data.tolist()))


def test_identical_points_k1():
    m = fm(np.tile([2.5, -1.0, 3.0], (100, 1)))
    clus = kmeans_fit(m, k=1, seed=0)
    assert np.allclose(clus.centroids[0], [2.5, -1.0, 3.0], atol=1e-6)
    assert clus.inertia == pytest.approx(0.0, abs=1e-9)


def test_two_blob_recovery():
    rng = np.random.default_rng(42)
    a = rng.normal([0, 0], 0.5, size=(100, 2))
    b = rng.normal([10, 10], 0.5, size=(100, 2))
    m = fm(np.vstack([a, b]))
    clus = kmeans_fit(m, k=2, seed=0)
    # oracle: sample means computed directly from the generating blobs
    means = np.array([a.mean(axis=0), b.mean(axis=0)])
    for mean in means:
        assert np.min(np.linalg.norm(clus.centroids - mean, axis=1)) < 0.3


def test_assign_exact_centroid():
    centroids = np.array([[0, 0], [5, 5], [9, 9]], dtype=float)
    m = fm([[9, 9]])
    assert assign(m, centroids)[0] == 2


def test_assign_tie_lowest_id():
    centroids = np.array([[0, 0], [4, 0]], dtype=float)
    m = fm([[2, 0]])
    assert assign(m, centroids)[0] == 0


def test_assign_matches_bruteforce():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(20, 4)).astype(np.float32)
    centroids = rng.normal(size=(3, 4))
    got = assign(fm(X), centroids)
    for i in range(20):
        best, best_d = 0, None
        for j in range(3):
            d = 0.0
            for c in range(4):
                d += (float(X[i, c]) - centroids[j, c]) ** 2
            if best_d is None or d < best_d:
                best, best_d = j, d
        assert got[i] == best


def test_assign_dim_mismatch():
    with pytest.raises(ClusteringError):
        assign(fm([[1, 2, 3]]), np.zeros((2, 2)))


def test_invalid_k():
    m = fm([[0, 0], [1, 1]])
    with pytest.raises(ClusteringError):
        kmeans_fit(m, k=0)
    with pytest.raises(ClusteringError):
        kmeans_fit(m, k=3)
    with pytest.raises(ClusteringError):
        kmeans_fit(fm(np.zeros((0, 2))), k=1)


def test_inertia_non_increasing_seeded_runs():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 5)).astype(np.float32)
    m = fm(X)
    for seed in range(20):
        clus = kmeans_fit(m, k=6, seed=seed)
        hist = clus.inertia_history
        assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))


def test_deterministic_per_seed():
    rng = np.random.default_rng(5)
    m = fm(rng.normal(size=(60, 3)))
    c1 = kmeans_fit(m, k=4, seed=11)
    c2 = kmeans_fit(m, k=4, seed=11)
    assert np.array_equal(c1.centroids, c2.centroids)
    assert np.array_equal(c1.assignments, c2.assignments)


def test_row_permutation_with_fixed_init():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(80, 3)).astype(np.float32)
    init = X[[0, 20, 40]].astype(float)
    perm = rng.permutation(80)
    c1 = kmeans_fit(fm(X), k=3, init_centroids=init)
    c2 = kmeans_fit(fm(X[perm]), k=3, init_centroids=init)
    assert np.array_equal(c1.assignments[perm], c2.assignments)
    assert np.allclose(np.sort(c1.centroids, axis=0), np.sort(c2.centroids, axis=0))


def test_centroids_are_cluster_means_at_convergence():
    rng = np.random.default_rng(13)
    centers = np.array([[0, 0], [8, 8], [-8, 8]])
    X = np.vstack([rng.normal(c, 0.4, size=(50, 2)) for c in centers])
    m = fm(X)
    clus = kmeans_fit(m, k=3, seed=0)
    for j in range(3):
        rows = m.data[clus.assignments == j].astype(float)
        assert rows.shape[0] > 0
        np.testing.assert_allclose(clus.centroids[j], rows.mean(axis=0), rtol=1e-5)


def test_empty_cluster_repair_keeps_k():
    # two far points plus duplicates force an empty cluster with bad init
    X = np.array([[0, 0]] * 10 + [[100, 100]] * 10, dtype=np.float32)
    init = np.array([[0, 0], [0.1, 0.1], [0.2, 0.2]], dtype=float)
    clus = kmeans_fit(fm(X), k=3, init_centroids=init)
    assert clus.centroids.shape == (3, 2)
    assert len(np.unique(clus.assignments)) >= 2
