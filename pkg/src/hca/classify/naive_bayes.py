"""Multinomial naive Bayes with optional additive smoothing.

P(word | c) = (count(word, c) + s) / (total_words(c) + s * V); with s = 0
this is the plain relative frequency. Scores are kept in log space and an
unseen word under s = 0 contributes -inf.
"""
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .. import kernels
from ..errors import UnclassifiableError, ValidationError
from ..features import FeatureVector, to_csr
from .data import LabeledSet, argmax_lowest, check_width


@dataclass
class NBModel:
    log_priors: np.ndarray  # (m,)
    log_likelihoods: np.ndarray  # (m, V)
    smoothing: float
    category_names: List[str]

    kind = "nb"

    @property
    def V(self) -> int:
        return self.log_likelihoods.shape[1]

    @property
    def m(self) -> int:
        return self.log_likelihoods.shape[0]


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def nb_train(data: LabeledSet, smoothing: float = 1.0) -> NBModel:
    if smoothing < 0:
        raise ValidationError(f"smoothing must be >= 0, got {smoothing}")
    data.require_all_classes()
    m, V = data.m, data.n_features
    indptr, indices, values = data.csr()
    counts, docs = kernels.class_counts(indptr, indices, values, data.label_array(), m, V)
    loglik = np.empty((m, V), dtype=np.float64)
    for c in range(m):
        total = float(counts[c].sum())
        if total == 0 and smoothing == 0:
            raise ValidationError(
                f"category {data.category_names[c]!r} has no words and smoothing is 0"
            )
        denom = total + smoothing * V
        loglik[c] = [_log((counts[c, i] + smoothing) / denom) for i in range(V)]
    n = data.n
    priors = np.array([_log(docs[c] / n) for c in range(m)], dtype=np.float64)
    return NBModel(priors, loglik, float(smoothing), list(data.category_names))


def _posteriors(scores: np.ndarray) -> List[float]:
    mx = max(scores)
    if mx == -math.inf:
        raise UnclassifiableError("every category has zero probability for this document")
    lse = mx + math.log(sum(math.exp(s - mx) for s in scores))
    return [s - lse for s in scores]


def nb_predict_many(model: NBModel, vectors: Sequence[FeatureVector]) -> List[Tuple[int, List[float]]]:
    indptr, indices, values = to_csr(vectors)
    check_width(indices, model.V)
    scores = kernels.linear_scores(model.log_likelihoods, model.log_priors, indptr, indices, values)
    out = []
    for row in scores.tolist():
        logpost = _posteriors(row)
        out.append((argmax_lowest(row), logpost))
    return out


def nb_predict(model: NBModel, x: FeatureVector) -> Tuple[int, List[float]]:
    """Return (category index, normalized log-posteriors)."""
    return nb_predict_many(model, [x])[0]
