"""Balancing active learning: CDD-scored, adaptively sub-pooled data selection."""

from .featio import FeatureMatrix, SelectionManifest, read_fmat, write_fmat
from .clustering import Clustering, kmeans_fit, assign
from .cdd import Metric, Direction, SortedPool, cdd_score, cdd_scores, sort_pool
from .pool import SubPool, LabelState, make_subpool, subpool_coverage
from .orchestrator import RunConfig, RunState, run_bal, run_baseline_random
from .harness import synth_generate, subpool_class_balance, compare_runs

__all__ = [
    "FeatureMatrix", "SelectionManifest", "read_fmat", "write_fmat",
    "Clustering", "kmeans_fit", "assign",
    "Metric", "Direction", "SortedPool", "cdd_score", "cdd_scores", "sort_pool",
    "SubPool", "LabelState", "make_subpool", "subpool_coverage",
    "RunConfig", "RunState", "run_bal", "run_baseline_random",
    "synth_generate", "subpool_class_balance", "compare_runs",
]

__version__ = "0.1.0"
