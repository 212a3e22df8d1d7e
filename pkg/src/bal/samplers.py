"""Per-cycle selection of K rows from a sub-pool.

The default sampler takes the K members with the lowest maximum posterior
probability (least confident). Entropy, cluster-center, and random samplers
cover the ablation alternatives. A sampler asked for more rows than the
sub-pool holds returns everything it has; the orchestrator tops up.
"""

import numpy as np

from .clustering import _sq_dists
from .cdd import SortedPool
from .pool import SubPool

PROB_SUM_TOL = 1e-5


class SamplerError(ValueError):
    pass


def _check_probs(pool: SubPool, probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[0] != len(pool.members):
        raise SamplerError(
            f"need one probability row per member: {probs.shape} vs {len(pool.members)}")
    if np.any(probs < 0):
        raise SamplerError("negative probability")
    sums = probs.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PROB_SUM_TOL):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise SamplerError(f"probability row {bad} sums to {sums[bad]}")
    return probs


def _take_lowest(members: np.ndarray, scores: np.ndarray, k: int):
    """K members with the smallest score; ties broken by ascending row index."""
    k = min(k, len(members))
    order = np.lexsort((members, scores))[:k]
    return members[order], scores[order]


def select_first_cycle(sp: SortedPool, k: int) -> np.ndarray:
    """Head of the sorted order: the K hardest-to-cluster rows."""
    if k > sp.n:
        raise SamplerError(f"K={k} exceeds pool size {sp.n}")
    return sp.order[:k].astype(np.int64)


def select_confidence(pool: SubPool, probs, k: int):
    """K members with the lowest max-class posterior."""
    probs = _check_probs(pool, probs)
    return _take_lowest(pool.members, probs.max(axis=1), k)


def entropy_of(probs: np.ndarray) -> np.ndarray:
    """Shannon entropy per row, natural log, with 0*log(0) = 0."""
    p = np.asarray(probs, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(p), 0.0)
    return -terms.sum(axis=1)


def select_entropy(pool: SubPool, probs, k: int):
    """K members with the highest predictive entropy."""
    probs = _check_probs(pool, probs)
    ent = entropy_of(probs)
    members, neg = _take_lowest(pool.members, -ent, k)
    return members, -neg


def select_cluster(pool: SubPool, features: np.ndarray, k: int, seed: int = 0):
    """One member nearest each of K k-means centers over the member features."""
    from .clustering import kmeans_fit  # local import to avoid cycle at module load
    from .featio import FeatureMatrix

    members = pool.members
    if k > len(members):
        k = len(members)
    if k == 0:
        return members[:0], np.zeros(0)
    feats = np.asarray(features, dtype=np.float32)[members]
    clus = kmeans_fit(FeatureMatrix(data=feats), k=k, seed=seed)
    d2 = _sq_dists(feats, clus.centroids)
    chosen, scores, used = [], [], set()
    for j in range(k):
        order = np.argsort(d2[:, j], kind="stable")
        for pos in order:
            if pos not in used:
                used.add(int(pos))
                chosen.append(int(members[pos]))
                scores.append(float(d2[pos, j]))
                break
    return np.asarray(chosen, dtype=np.int64), np.asarray(scores)


def select_random(pool: SubPool, k: int, seed: int = 0):
    """Uniform sample without replacement, deterministic per seed."""
    members = pool.members
    k = min(k, len(members))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(members, size=k, replace=False).astype(np.int64)
    return chosen, np.zeros(k)


SAMPLERS = ("confidence", "entropy", "cluster", "random")
