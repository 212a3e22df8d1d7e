"""Score a synthetic pool with CDD and compare against the nearest-center baseline.

A point halfway between two cluster centers scores zero (it sits on the
decision boundary); the nearest-center metric instead calls distant points
"hard", which is the failure mode the difference score avoids.
"""

import numpy as np

from bal import kmeans_fit, sort_pool, synth_generate
from bal.cdd import Metric, cdd_score, nearest_distance_score

pool = synth_generate(classes=4, per_class=100, dim=2, spread=0.6, sep=5.0, seed=0)
clus = kmeans_fit(pool, k=4, seed=0)
print(f"pool: {pool.n_rows} points, k-means inertia {clus.inertia:.1f}")

# hand-picked geometry: two centers, one boundary point, one far outlier
centers = np.array([[0.0, 0.0], [4.0, 0.0]])
boundary = [2.0, 0.0]
outlier = [2.0, 30.0]
print(f"boundary point: cdd={cdd_score(boundary, centers):.2f}, "
      f"nearest={nearest_distance_score(boundary, centers):.2f}")
print(f"far outlier:    cdd={cdd_score(outlier, centers):.2f}, "
      f"nearest={nearest_distance_score(outlier, centers):.2f}")
# cdd calls the boundary point hardest; nearest-distance calls the outlier hardest

for metric in (Metric.CDD, Metric.NEAREST_DISTANCE):
    sp = sort_pool(pool, clus.centroids, metric=metric)
    hardest = sp.order[:5]
    print(f"{metric.value}: 5 hardest rows {[int(i) for i in hardest]}, "
          f"scores {np.round(sp.scores[hardest], 3)}")
