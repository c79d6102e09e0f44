"""Maximum entropy (multinomial logistic) classifier.

P(c | d) = exp(b_c + sum_i lambda[c, i] * count_i(d)) / Z(d), trained by
full-batch gradient ascent on the mean log-likelihood minus
l2 * ||lambda||^2.
"""
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .. import kernels
from ..errors import DivergenceError
from ..features import FeatureVector, to_csr
from .data import LabeledSet, TrainConfig, argmax_lowest, check_width


@dataclass
class MaxEntModel:
    lambdas: np.ndarray  # (m, V)
    bias: np.ndarray  # (m,)
    category_names: List[str]
    history: List[float] = field(default_factory=list, repr=False)

    kind = "maxent"

    @property
    def V(self) -> int:
        return self.lambdas.shape[1]

    @property
    def m(self) -> int:
        return self.lambdas.shape[0]


def objective_and_gradient(lambdas, bias, data: LabeledSet, l2: float):
    """(objective, d/dlambdas, d/dbias) at the given parameters."""
    indptr, indices, values = data.csr()
    return kernels.maxent_loss_grad(
        np.ascontiguousarray(lambdas, dtype=np.float64),
        np.ascontiguousarray(bias, dtype=np.float64),
        indptr, indices, values, data.label_array(), float(l2),
    )


def maxent_train(data: LabeledSet, cfg: TrainConfig = TrainConfig()) -> MaxEntModel:
    m, V = data.m, data.n_features
    lambdas = np.zeros((m, V), dtype=np.float64)
    bias = np.zeros(m, dtype=np.float64)
    history = []
    for epoch in range(cfg.epochs + 1):
        obj, g_lam, g_bias = objective_and_gradient(lambdas, bias, data, cfg.l2)
        if not math.isfinite(obj):
            raise DivergenceError(epoch, "log-likelihood is not finite (learning rate too high?)")
        history.append(obj)
        if epoch == cfg.epochs:
            break
        gnorm = max(float(np.abs(g_lam).max(initial=0.0)), float(np.abs(g_bias).max()))
        if gnorm < cfg.tolerance:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            lambdas = lambdas + cfg.learning_rate * g_lam
            bias = bias + cfg.learning_rate * g_bias
    return MaxEntModel(lambdas, bias, list(data.category_names), history)


def softmax_log(scores: Sequence[float]) -> List[float]:
    mx = max(scores)
    lse = mx + math.log(sum(math.exp(s - mx) for s in scores))
    return [s - lse for s in scores]


def maxent_predict_many(model: MaxEntModel, vectors: Sequence[FeatureVector]) -> List[Tuple[int, List[float]]]:
    indptr, indices, values = to_csr(vectors)
    check_width(indices, model.V)
    scores = kernels.linear_scores(model.lambdas, model.bias, indptr, indices, values)
    out = []
    for row in scores.tolist():
        logp = softmax_log(row)
        out.append((argmax_lowest(row), [math.exp(v) for v in logp]))
    return out


def maxent_predict(model: MaxEntModel, x: FeatureVector) -> Tuple[int, List[float]]:
    """Return (category index, class probabilities)."""
    return maxent_predict_many(model, [x])[0]


def maxent_probabilities(lambdas, bias, x: FeatureVector) -> List[float]:
    indptr, indices, values = to_csr([x])
    row = kernels.linear_scores(
        np.ascontiguousarray(lambdas, dtype=np.float64),
        np.ascontiguousarray(bias, dtype=np.float64),
        indptr, indices, values,
    )[0]
    return [math.exp(v) for v in softmax_log(row.tolist())]
