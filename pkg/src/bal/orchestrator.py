"""End-to-end selection loop.

Cluster once, score and sort the pool, label the head in cycle 1, pick the
balancing factor (fixed or searched), then iterate sub-pool -> sample ->
label -> train until the budget is spent. Ground-truth labels act as the
labeling oracle: they are revealed to the model only for selected rows, and
never drive scoring or sub-pooling.
"""

import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import balancer, clustering, samplers, taskmodel
from .cdd import Direction, Metric, shuffled_pool, sort_pool
from .featio import FeatureMatrix, SelectionManifest, write_manifest
from .pool import LabelState, make_subpool


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    cycles: int = 8                      # I
    budget_per_cycle: int = 50           # K
    n_clusters: int = 10                 # N_k
    metric: Metric = Metric.CDD
    direction: Direction = Direction.ASCENDING
    sampler: str = "confidence"
    beta: object = "auto"                # float or "auto"
    beta_candidates: Optional[list] = None
    model: taskmodel.TaskModelSpec = field(default_factory=taskmodel.TaskModelSpec)
    train_mode: str = "warm"             # warm | cold
    seed: int = 0
    eval_split: float = 0.2
    shuffle_pool: bool = False           # ablation: random order instead of a sort

    def __post_init__(self):
        if isinstance(self.metric, str):
            self.metric = Metric(self.metric)
        if isinstance(self.direction, str):
            self.direction = Direction(self.direction)
        if isinstance(self.model, dict):
            self.model = taskmodel.TaskModelSpec(**self.model)

    def validate(self, n_rows: int):
        if self.cycles < 2:
            raise ConfigError("need at least 2 cycles")
        if self.budget_per_cycle < 1:
            raise ConfigError("budget_per_cycle must be >= 1")
        if self.cycles * self.budget_per_cycle > n_rows:
            raise ConfigError(
                f"budget {self.cycles * self.budget_per_cycle} exceeds pool {n_rows}")
        if not 0 < self.eval_split < 1:
            raise ConfigError("eval_split must be in (0, 1)")
        if self.sampler not in samplers.SAMPLERS:
            raise ConfigError(f"unknown sampler {self.sampler!r}")
        if self.train_mode not in ("warm", "cold"):
            raise ConfigError(f"unknown train_mode {self.train_mode!r}")
        if self.beta != "auto":
            beta = float(self.beta)
            if beta * n_rows / self.cycles < self.budget_per_cycle:
                raise ConfigError(f"beta={beta} leaves sub-pools smaller than K")

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["metric"] = self.metric.value
        d["direction"] = self.direction.value
        d["model"]["kind"] = self.model.kind.value
        return d


@dataclass
class RunState:
    label_state: LabelState
    accuracy_trace: list
    models: list                              # per-cycle {cycle, train_accuracy}
    beta: float
    beta_report: Optional[balancer.BetaSearchReport] = None
    config: Optional[RunConfig] = None

    @property
    def manifests(self):
        return self.label_state.per_cycle


def _topup(selected, scores, subpool, sp, labeled, needed):
    """Fill a shortfall from the nearest unlabeled positions outside the window."""
    selected = list(selected)
    scores = list(scores)
    taken = set(selected) | set(labeled)
    n = sp.n
    outside = [p for p in range(n) if p < subpool.start_pos or p >= subpool.end_pos]
    outside.sort(key=lambda p: (subpool.start_pos - p if p < subpool.start_pos
                                else p - subpool.end_pos + 1, p))
    for p in outside:
        if len(selected) >= needed:
            break
        row = int(sp.order[p])
        if row not in taken:
            selected.append(row)
            scores.append(float("nan"))
            taken.add(row)
    return np.asarray(selected, dtype=np.int64), scores


def _pool_for(config: RunConfig, features: FeatureMatrix):
    clus = clustering.kmeans_fit(features, k=config.n_clusters, seed=config.seed)
    if config.shuffle_pool:
        return clus, shuffled_pool(features, seed=config.seed)
    return clus, sort_pool(features, clus.centroids, config.metric, config.direction)


def run_bal(config: RunConfig, features: FeatureMatrix, out_dir=None) -> RunState:
    """Run the full multi-cycle selection loop; deterministic per seed."""
    n = features.n_rows
    config.validate(n)
    if features.labels is None:
        raise ConfigError("run needs ground-truth labels as the labeling oracle")
    cycles, k = config.cycles, config.budget_per_cycle

    clus, sp = _pool_for(config, features)

    state = LabelState()
    selected = samplers.select_first_cycle(sp, k)
    first_scores = [float(sp.scores[i]) for i in selected]
    state.commit(SelectionManifest(cycle=1, beta=0.0, subpool_start=0,
                                   subpool_end=k, selected=[int(i) for i in selected],
                                   scores=first_scores))
    model = taskmodel.train(config.model, features, state.labeled)
    trace = [taskmodel.evaluate(model, features)]
    models = [{"cycle": 1, "train_accuracy": model.train_accuracy}]

    report = None
    if config.beta == "auto":
        candidates = (config.beta_candidates or
                      balancer.default_candidates(k, cycles, n))
        report = balancer.choose_beta(candidates, sp, state, k, cycles,
                                      config.model, features, model,
                                      sampler=config.sampler,
                                      eval_split=config.eval_split,
                                      seed=config.seed)
        beta = report.chosen
    else:
        beta = float(config.beta)

    for cycle in range(2, cycles + 1):
        remaining = n - len(state.labeled)
        k_i = min(k, remaining)
        if k_i == 0:
            break
        subpool = make_subpool(sp, cycle, cycles, beta, labeled=state,
                               min_members=min(k_i, remaining))
        probs = taskmodel.predict_proba(model, features, subpool.members)
        cycle_seed = config.seed * 10_000 + cycle
        if config.sampler == "confidence":
            sel, scores = samplers.select_confidence(subpool, probs, k_i)
        elif config.sampler == "entropy":
            sel, scores = samplers.select_entropy(subpool, probs, k_i)
        elif config.sampler == "cluster":
            sel, scores = samplers.select_cluster(subpool, features.data, k_i,
                                                  seed=cycle_seed)
        else:
            sel, scores = samplers.select_random(subpool, k_i, seed=cycle_seed)
        if len(sel) < k_i:
            sel, scores = _topup(sel, scores, subpool, sp, state.labeled, k_i)
        state.commit(SelectionManifest(cycle=cycle, beta=beta,
                                       subpool_start=subpool.start_pos,
                                       subpool_end=subpool.end_pos,
                                       selected=[int(i) for i in sel],
                                       scores=[float(s) for s in scores]))
        init = model if config.train_mode == "warm" else None
        model = taskmodel.train(config.model, features, state.labeled, init=init)
        trace.append(taskmodel.evaluate(model, features))
        models.append({"cycle": cycle, "train_accuracy": model.train_accuracy})

    run = RunState(label_state=state, accuracy_trace=trace, models=models,
                   beta=beta, beta_report=report, config=config)
    if out_dir is not None:
        write_run_dir(run, features, out_dir)
    return run


def run_baseline_random(config: RunConfig, features: FeatureMatrix,
                        out_dir=None) -> RunState:
    """Same loop with plain uniform selection from the whole unlabeled pool."""
    n = features.n_rows
    config.validate(n)
    if features.labels is None:
        raise ConfigError("run needs ground-truth labels as the labeling oracle")
    rng = np.random.default_rng(config.seed)
    state = LabelState()
    trace, models = [], []
    model = None
    for cycle in range(1, config.cycles + 1):
        unlabeled = np.setdiff1d(np.arange(n), sorted(state.labeled))
        k_i = min(config.budget_per_cycle, len(unlabeled))
        if k_i == 0:
            break
        sel = rng.choice(unlabeled, size=k_i, replace=False)
        state.commit(SelectionManifest(cycle=cycle, beta=0.0, subpool_start=0,
                                       subpool_end=n,
                                       selected=[int(i) for i in np.sort(sel)],
                                       scores=[0.0] * k_i))
        init = model if (config.train_mode == "warm" and model is not None) else None
        model = taskmodel.train(config.model, features, state.labeled, init=init)
        trace.append(taskmodel.evaluate(model, features))
        models.append({"cycle": cycle, "train_accuracy": model.train_accuracy})
    run = RunState(label_state=state, accuracy_trace=trace, models=models,
                   beta=0.0, beta_report=None, config=config)
    if out_dir is not None:
        write_run_dir(run, features, out_dir)
    return run


def write_run_dir(run: RunState, features: FeatureMatrix, out_dir):
    """Emit config.json, beta_report.json, manifests.jsonl, and trace.csv."""
    os.makedirs(out_dir, exist_ok=True)
    n = features.n_rows
    with open(os.path.join(out_dir, "config.json"), "w") as f:
        json.dump(run.config.to_dict() if run.config else {}, f, indent=2,
                  sort_keys=True)
        f.write("\n")
    if run.beta_report is not None:
        with open(os.path.join(out_dir, "beta_report.json"), "w") as f:
            json.dump(run.beta_report.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
    write_manifest(run.manifests, os.path.join(out_dir, "manifests.jsonl"))
    with open(os.path.join(out_dir, "trace.csv"), "w") as f:
        f.write("cycle,labeled_count,lambda,accuracy\n")
        labeled = 0
        for m, acc in zip(run.manifests, run.accuracy_trace):
            labeled += len(m.selected)
            f.write(f"{m.cycle},{labeled},{labeled / n:.6f},{acc:.10f}\n")


def replay_labels(manifests):
    """Label sets reconstructed purely from a manifest sequence."""
    labeled = set()
    for m in manifests:
        dup = labeled.intersection(m.selected)
        if dup:
            raise ConfigError(f"manifest replay found duplicate rows {sorted(dup)[:5]}")
        labeled.update(m.selected)
    return labeled
