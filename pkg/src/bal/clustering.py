"""K-means (Lloyd) with k-means++ seeding, used to produce the CDD cluster centers."""

from dataclasses import dataclass, field

import numpy as np

from .featio import FeatureMatrix


class ClusteringError(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    centroids: np.ndarray        # (k, D) float64
    assignments: np.ndarray      # (N,) int64, argmin squared distance, ties to lowest id
    inertia: float               # sum of squared distances to assigned centroid
    iterations: int
    inertia_history: list = field(default_factory=list)  # per-iteration, non-increasing

    def to_dict(self):
        return {
            "centroids": self.centroids.tolist(),
            "assignments": self.assignments.tolist(),
            "inertia": self.inertia,
            "iterations": self.iterations,
        }


def _sq_dists(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(N, k) squared Euclidean distances, accumulated in float64."""
    X = X.astype(np.float64, copy=False)
    C = centroids.astype(np.float64, copy=False)
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def assign(m, centroids: np.ndarray) -> np.ndarray:
    """Per-row nearest centroid by squared distance; ties go to the lowest id."""
    X = m.data if isinstance(m, FeatureMatrix) else np.asarray(m)
    centroids = np.asarray(centroids, dtype=np.float64)
    if centroids.ndim != 2 or centroids.shape[1] != X.shape[1]:
        raise ClusteringError(
            f"centroid dim {centroids.shape} does not match features {X.shape}")
    return np.argmin(_sq_dists(X, centroids), axis=1)


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    first = rng.integers(n)
    centers[0] = X[first]
    # closest squared distance to any chosen center so far
    d2 = ((X.astype(np.float64) - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)  # all points coincide with chosen centers
        else:
            idx = rng.choice(n, p=d2 / total)
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X.astype(np.float64) - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans_fit(m: FeatureMatrix, k: int, seed: int = 0, max_iter: int = 300,
               tol: float = 1e-4, init_centroids=None) -> Clustering:
    """Lloyd iterations from seeded k-means++; deterministic per (m, k, seed).

    Stops when the max centroid displacement drops below tol or max_iter is hit.
    Empty clusters are reseeded to the point farthest from its assigned centroid.
    """
    X = m.data
    n = X.shape[0]
    if n == 0:
        raise ClusteringError("cannot cluster an empty matrix")
    if k < 1:
        raise ClusteringError("k must be >= 1")
    if k > n:
        raise ClusteringError(f"k={k} exceeds {n} rows")
    if max_iter < 1:
        raise ClusteringError("max_iter must be >= 1")
    if tol < 0:
        raise ClusteringError("tol must be >= 0")

    if init_centroids is not None:
        centroids = np.asarray(init_centroids, dtype=np.float64).copy()
        if centroids.shape != (k, X.shape[1]):
            raise ClusteringError("init_centroids shape mismatch")
    else:
        rng = np.random.default_rng(seed)
        centroids = _kmeans_pp_init(X, k, rng)

    X64 = X.astype(np.float64)
    history = []
    labels = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        d2 = _sq_dists(X, centroids)
        labels = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(n), labels]

        # repair empty clusters before the update so k stays constant
        counts = np.bincount(labels, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            far = int(np.argmax(point_d2))
            centroids[empty] = X64[far]
            labels[far] = empty
            point_d2[far] = 0.0
            counts = np.bincount(labels, minlength=k)

        history.append(float(point_d2.sum()))

        new_centroids = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = X64[members].mean(axis=0)
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        if shift < tol:
            break

    d2 = _sq_dists(X, centroids)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(n), labels].sum())
    history.append(inertia)
    return Clustering(centroids=centroids, assignments=labels, inertia=inertia,
                      iterations=iterations, inertia_history=history)
