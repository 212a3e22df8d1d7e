"""Balancing-factor search.

Each candidate beta gets a trial: build the cycle-2 sub-pool at that beta,
sample K rows with the cycle-1 model's posteriors, train a fresh model on
cycle-1 labels plus the trial selection, and score it on a held-out split of
the labeled rows. The candidate with the best score wins; ties go to the
smallest beta. Trial labels are not committed unless explicitly requested.
"""

from dataclasses import dataclass, field

import numpy as np

from . import samplers, taskmodel
from .cdd import SortedPool
from .featio import FeatureMatrix
from .pool import LabelState, make_subpool

DEFAULT_GRID = (0.6, 0.8, 1.0, 1.3, 1.6, 2.0)


class BalancerError(ValueError):
    pass


@dataclass
class BetaSearchReport:
    candidates: list
    accuracies: list
    chosen: float
    committed: set = field(default_factory=set)  # trial labels, only if commit_all

    def to_dict(self):
        return {"candidates": list(self.candidates),
                "accuracies": list(self.accuracies),
                "chosen": self.chosen}


def default_candidates(k: int, cycles: int, n: int):
    """Candidate grid spanning the published operating points, filtered to the
    feasibility floor beta >= K*I/N. May be empty when no grid point fits."""
    floor = k * cycles / n
    return [b for b in DEFAULT_GRID if b >= floor]


def holdout_split(labeled, eval_split: float, seed: int):
    """Deterministic (train, eval) partition of the labeled rows."""
    idx = np.asarray(sorted(labeled), dtype=np.int64)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(idx.size)
    n_eval = max(1, int(round(eval_split * idx.size)))
    n_eval = min(n_eval, idx.size - 1) if idx.size > 1 else 0
    eval_idx = idx[perm[:n_eval]]
    train_idx = idx[perm[n_eval:]]
    return train_idx, eval_idx


def _sample(sampler: str, subpool, probs_full, features, k, seed):
    if sampler == "confidence":
        return samplers.select_confidence(subpool, probs_full[subpool.members], k)
    if sampler == "entropy":
        return samplers.select_entropy(subpool, probs_full[subpool.members], k)
    if sampler == "cluster":
        return samplers.select_cluster(subpool, features.data, k, seed=seed)
    if sampler == "random":
        return samplers.select_random(subpool, k, seed=seed)
    raise BalancerError(f"unknown sampler {sampler!r}")


def choose_beta(candidates, sp: SortedPool, state: LabelState, k: int, cycles: int,
                spec: taskmodel.TaskModelSpec, features: FeatureMatrix,
                cycle1_model: taskmodel.TrainedModel, sampler: str = "confidence",
                eval_split: float = 0.2, seed: int = 0,
                commit_all_candidates: bool = False,
                fitness=None) -> BetaSearchReport:
    """Evaluate every candidate on the cycle-2 sub-pool and pick the argmax.

    fitness, when given, replaces train-and-evaluate: it is called as
    fitness(beta, selected_rows) and must return the trial score.
    """
    candidates = list(candidates)
    if not candidates:
        raise BalancerError("no beta candidates")
    n = sp.n
    floor = k * cycles / n
    feasible = [b for b in candidates if b * n / cycles >= k - 1e-9]
    if not feasible:
        raise BalancerError(f"all candidates below feasibility floor {floor:.4g}")

    probs_full = np.zeros((n, int(features.class_count)))
    probs_full[:] = taskmodel.predict_proba(cycle1_model, features)

    accuracies = []
    committed = set()
    for beta in feasible:
        subpool = make_subpool(sp, 2, cycles, beta, labeled=state, min_members=k)
        chosen_rows, _ = _sample(sampler, subpool, probs_full, features, k, seed)
        if fitness is not None:
            acc = fitness(beta, chosen_rows)
        else:
            trial_labeled = set(state.labeled) | {int(r) for r in chosen_rows}
            train_idx, eval_idx = holdout_split(trial_labeled, eval_split, seed)
            # trials always train cold so candidates start from identical conditions
            model = taskmodel.train(spec, features, train_idx)
            acc = taskmodel.evaluate(model, features, eval_idx)
        accuracies.append(acc)
        if commit_all_candidates:
            committed.update(int(r) for r in chosen_rows)

    best = max(accuracies)
    chosen = min(b for b, a in zip(feasible, accuracies) if a == best)
    return BetaSearchReport(candidates=feasible, accuracies=accuracies,
                            chosen=chosen, committed=committed)
