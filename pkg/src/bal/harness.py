"""Synthetic pools and run analytics.

Gaussian-mixture feature generation stands in for learned embeddings at desk
scale; analytics cover per-cycle class balance of the selections and paired
method comparisons.
"""

import numpy as np

from .featio import FeatureMatrix


class HarnessError(ValueError):
    pass


def synth_generate(classes: int = 10, per_class: int = 200, dim: int = 16,
                   spread: float = 1.0, sep: float = 4.0,
                   seed: int = 0) -> FeatureMatrix:
    """Isotropic Gaussian blobs around uniformly drawn class centers."""
    if classes < 2 or per_class < 1 or dim < 2:
        raise HarnessError("need classes >= 2, per_class >= 1, dim >= 2")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-sep, sep, size=(classes, dim))
    data = np.empty((classes * per_class, dim), dtype=np.float32)
    labels = np.empty(classes * per_class, dtype=np.uint32)
    for c in range(classes):
        block = slice(c * per_class, (c + 1) * per_class)
        data[block] = centers[c] + spread * rng.standard_normal((per_class, dim))
        labels[block] = c
    return FeatureMatrix(data=data, labels=labels, class_count=classes)


def class_balance_entropy(class_ids, n_classes: int) -> float:
    """Normalized entropy of a class histogram: 1 = perfectly even, 0 = one class."""
    class_ids = np.asarray(class_ids, dtype=np.int64)
    if class_ids.size == 0:
        raise HarnessError("empty selection")
    counts = np.bincount(class_ids, minlength=n_classes).astype(np.float64)
    p = counts / counts.sum()
    nz = p[p > 0]
    h = -(nz * np.log(nz)).sum()
    return float(h / np.log(n_classes))


def subpool_class_balance(run, features: FeatureMatrix):
    """Per-cycle normalized entropy of the selected rows' class histogram."""
    if features.labels is None:
        raise HarnessError("balance analysis needs labels")
    n_classes = int(features.class_count)
    out = []
    for m in run.manifests:
        ids = features.labels[np.asarray(m.selected, dtype=np.int64)]
        out.append(class_balance_entropy(ids, n_classes))
    return out


def compare_runs(a, b):
    """Per-cycle accuracy deltas (a minus b) on a shared labeling grid."""
    if len(a.accuracy_trace) != len(b.accuracy_trace):
        raise HarnessError("runs have different cycle counts")
    for ma, mb in zip(a.manifests, b.manifests):
        if len(ma.selected) != len(mb.selected):
            raise HarnessError("runs labeled different amounts per cycle")
    rows = []
    for i, (xa, xb) in enumerate(zip(a.accuracy_trace, b.accuracy_trace), start=1):
        rows.append({"cycle": i, "accuracy_a": xa, "accuracy_b": xb,
                     "delta": xa - xb})
    return rows


def comparison_csv(rows, path):
    with open(path, "w") as f:
        f.write("cycle,accuracy_a,accuracy_b,delta\n")
        for r in rows:
            f.write(f"{r['cycle']},{r['accuracy_a']:.10f},"
                    f"{r['accuracy_b']:.10f},{r['delta']:.10f}\n")
