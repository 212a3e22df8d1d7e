"""Cluster Distance Difference scoring and the CDD-sorted pool.

The score of a row is the gap between its squared Euclidean distances to the
two nearest cluster centers; zero means the row sits on the decision boundary
between its two closest clusters. The ablation baseline scores each row by the
squared distance to its single nearest center.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .clustering import _sq_dists
from .featio import FeatureMatrix


class Metric(enum.Enum):
    CDD = "cdd"
    NEAREST_DISTANCE = "nearest"


class Direction(enum.Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class SortedPool:
    order: np.ndarray     # position -> original row index (permutation of [0, N))
    scores: np.ndarray    # per-row score, indexed by original row
    metric: Metric
    direction: Direction

    @property
    def n(self) -> int:
        return self.order.shape[0]


def cdd_scores(X, centroids) -> np.ndarray:
    """Vectorized CDD for every row: second-smallest minus smallest squared distance."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float32))
    centroids = np.asarray(centroids)
    if centroids.ndim != 2 or centroids.shape[1] != X.shape[1]:
        raise ScoringError("centroid dimension does not match features")
    if centroids.shape[0] < 2:
        raise ScoringError("CDD needs at least 2 cluster centers")
    d2 = _sq_dists(X, centroids)
    two = np.partition(d2, 1, axis=1)[:, :2]
    return two[:, 1] - two[:, 0]


def cdd_score(f, centroids) -> float:
    """CDD of a single feature row."""
    return float(cdd_scores(np.asarray(f)[None, :], centroids)[0])


def nearest_distance_scores(X, centroids) -> np.ndarray:
    """Squared distance to the nearest center, for every row."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float32))
    centroids = np.asarray(centroids)
    if centroids.ndim != 2 or centroids.shape[1] != X.shape[1]:
        raise ScoringError("centroid dimension does not match features")
    if centroids.shape[0] < 1:
        raise ScoringError("need at least 1 cluster center")
    return _sq_dists(X, centroids).min(axis=1)


def nearest_distance_score(f, centroids) -> float:
    return float(nearest_distance_scores(np.asarray(f)[None, :], centroids)[0])


def sort_pool(m: FeatureMatrix, centroids, metric: Metric = Metric.CDD,
              direction: Direction = Direction.ASCENDING) -> SortedPool:
    """Stable sort of all row indices by score; ties keep ascending row index."""
    if metric is Metric.CDD:
        scores = cdd_scores(m.data, centroids)
    else:
        scores = nearest_distance_scores(m.data, centroids)
    key = scores if direction is Direction.ASCENDING else -scores
    order = np.argsort(key, kind="stable")
    return SortedPool(order=order, scores=scores, metric=metric, direction=direction)


def shuffled_pool(m: FeatureMatrix, seed: int) -> SortedPool:
    """Random permutation in place of a score sort; baseline for balance studies."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(m.n_rows)
    scores = np.zeros(m.n_rows, dtype=np.float64)
    return SortedPool(order=order, scores=scores, metric=Metric.CDD,
                      direction=Direction.ASCENDING)
