"""Pluggable main-task model.

The built-in surrogate is multinomial logistic regression trained by
full-batch gradient descent from zero-initialized weights, so the whole
selection loop is deterministic and a zero-epoch model predicts exactly
uniform posteriors. An external mode reads per-cycle posterior matrices and
accuracies from files, which is where a real training pipeline plugs in.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .featio import FeatureMatrix, read_fmat


class ModelError(ValueError):
    pass


class ModelKind(enum.Enum):
    SOFTMAX_REGRESSION = "softmax_regression"
    EXTERNAL = "external"


@dataclass
class TaskModelSpec:
    kind: ModelKind = ModelKind.SOFTMAX_REGRESSION
    learning_rate: float = 0.5
    epochs: int = 300
    l2: float = 1e-2
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.kind, str):
            self.kind = ModelKind(self.kind)
        if self.learning_rate <= 0:
            raise ModelError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ModelError("epochs must be >= 1")
        if self.l2 < 0:
            raise ModelError("l2 must be >= 0")


@dataclass
class TrainedModel:
    weights: np.ndarray    # (C, D)
    bias: np.ndarray       # (C,)
    train_accuracy: float
    degenerate: bool = False   # labeled set held a single class
    loss_history: list = field(default_factory=list)


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grads(weights, bias, X, y_onehot, l2):
    """Mean cross-entropy with L2 on weights, plus its analytic gradients."""
    n = X.shape[0]
    probs = softmax(X @ weights.T + bias)
    eps = 1e-12
    data_loss = -np.sum(y_onehot * np.log(probs + eps)) / n
    loss = data_loss + 0.5 * l2 * np.sum(weights ** 2)
    delta = (probs - y_onehot) / n
    grad_w = delta.T @ X + l2 * weights
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def train(spec: TaskModelSpec, features: FeatureMatrix, labeled_idx,
          init: TrainedModel = None) -> TrainedModel:
    """Full-batch gradient descent on the labeled rows; deterministic."""
    idx = np.asarray(sorted(int(i) for i in labeled_idx), dtype=np.int64)
    if idx.size == 0:
        raise ModelError("empty labeled set")
    if features.labels is None:
        raise ModelError("features carry no labels to train on")
    n_classes = int(features.class_count)
    X = features.data[idx].astype(np.float64)
    y = features.labels[idx].astype(np.int64)
    degenerate = len(np.unique(y)) < 2
    y_onehot = np.zeros((idx.size, n_classes))
    y_onehot[np.arange(idx.size), y] = 1.0

    if init is not None:
        weights = init.weights.copy()
        bias = init.bias.copy()
    else:
        weights = np.zeros((n_classes, features.n_cols))
        bias = np.zeros(n_classes)

    history = []
    for _ in range(spec.epochs):
        loss, gw, gb = loss_and_grads(weights, bias, X, y_onehot, spec.l2)
        history.append(loss)
        weights -= spec.learning_rate * gw
        bias -= spec.learning_rate * gb

    model = TrainedModel(weights=weights, bias=bias, train_accuracy=0.0,
                         degenerate=degenerate, loss_history=history)
    model.train_accuracy = evaluate(model, features, idx)
    return model


def predict_proba(model: TrainedModel, features: FeatureMatrix, idx=None) -> np.ndarray:
    """Softmax posteriors for the given rows (all rows when idx is None)."""
    X = features.data if idx is None else features.data[np.asarray(idx, dtype=np.int64)]
    X = X.astype(np.float64)
    if X.shape[1] != model.weights.shape[1]:
        raise ModelError(f"feature dim {X.shape[1]} does not match model "
                         f"{model.weights.shape[1]}")
    return softmax(X @ model.weights.T + model.bias)


def evaluate(model: TrainedModel, features: FeatureMatrix, idx=None) -> float:
    """Argmax accuracy on labeled rows; argmax ties go to the lowest class id."""
    if features.labels is None:
        raise ModelError("evaluation needs labels")
    if idx is None:
        idx = np.arange(features.n_rows)
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        raise ModelError("empty evaluation set")
    probs = predict_proba(model, features, idx)
    pred = np.argmax(probs, axis=1)
    return float(np.mean(pred == features.labels[idx].astype(np.int64)))


@dataclass
class ExternalModelSource:
    """Posteriors and accuracy produced outside the engine, keyed by cycle.

    probs_template: path template with a {cycle} field pointing at an N x C
    FMAT file of posteriors; accuracy_template: one-line text file of the
    cycle's evaluation accuracy.
    """

    probs_template: str
    accuracy_template: str

    def probs_for_cycle(self, cycle: int) -> np.ndarray:
        m = read_fmat(self.probs_template.format(cycle=cycle))
        return m.data.astype(np.float64)

    def accuracy_for_cycle(self, cycle: int) -> float:
        with open(self.accuracy_template.format(cycle=cycle)) as f:
            return float(f.read().strip())
