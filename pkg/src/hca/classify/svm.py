"""One-vs-rest linear SVM trained by deterministic subgradient descent.

For each category c the documents are relabeled +1 (c) / -1 (rest) and
(l2 / 2) * ||w||^2 + mean_j max(0, 1 - y_j (w . x_j + b)) is minimized with
step size lr / (1 + epoch) over the full batch.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .. import kernels
from ..errors import DivergenceError, ValidationError
from ..features import FeatureVector, to_csr
from .data import LabeledSet, TrainConfig, argmax_lowest, check_width


@dataclass
class SVMModel:
    weights: np.ndarray  # (m, V)
    bias: np.ndarray  # (m,)
    regularization: float
    category_names: List[str]
    histories: List[np.ndarray] = field(default_factory=list, repr=False)

    kind = "svm"

    @property
    def V(self) -> int:
        return self.weights.shape[1]

    @property
    def m(self) -> int:
        return self.weights.shape[0]


def train_binary(indptr, indices, values, y, n_features, cfg: TrainConfig):
    """Fit one separator for labels y in {+1, -1}; returns (w, b, objective history)."""
    w, b, history, _, diverged = kernels.svm_train_binary(
        indptr, indices, values, np.ascontiguousarray(y, dtype=np.float64),
        int(n_features), float(cfg.l2), float(cfg.learning_rate), int(cfg.epochs), float(cfg.tolerance),
    )
    if diverged >= 0:
        raise DivergenceError(diverged, "hinge objective is not finite")
    return w, b, history


def svm_train(data: LabeledSet, cfg: TrainConfig = TrainConfig()) -> SVMModel:
    if data.m < 2:
        raise ValidationError("SVM training needs at least 2 categories")
    if not cfg.l2 > 0:
        raise ValidationError("SVM regularization (l2) must be > 0")
    labels = data.label_array()
    indptr, indices, values = data.csr()
    W = np.zeros((data.m, data.n_features), dtype=np.float64)
    b = np.zeros(data.m, dtype=np.float64)
    histories = []
    for c in range(data.m):
        if not (labels == c).any():
            raise ValidationError(f"category {data.category_names[c]!r} has no positive examples")
        y = np.where(labels == c, 1.0, -1.0)
        W[c], b[c], hist = train_binary(indptr, indices, values, y, data.n_features, cfg)
        histories.append(hist)
    return SVMModel(W, b, float(cfg.l2), list(data.category_names), histories)


def svm_predict_many(model: SVMModel, vectors: Sequence[FeatureVector]) -> List[Tuple[int, List[float]]]:
    indptr, indices, values = to_csr(vectors)
    check_width(indices, model.V)
    margins = kernels.linear_scores(model.weights, model.bias, indptr, indices, values)
    return [(argmax_lowest(row), row) for row in margins.tolist()]


def svm_predict(model: SVMModel, x: FeatureVector) -> Tuple[int, List[float]]:
    """Return (category index, per-category margins w_c . x + b_c)."""
    return svm_predict_many(model, [x])[0]


def hinge_objective(w, b, X, y, l2) -> float:
    """Dense reference for (l2/2)||w||^2 + mean hinge; used for checks, not training."""
    X = np.asarray(X, dtype=np.float64)
    z = np.asarray(y, dtype=np.float64) * (X @ np.asarray(w) + b)
    return 0.5 * l2 * float(np.dot(w, w)) + float(np.maximum(0.0, 1.0 - z).mean())
