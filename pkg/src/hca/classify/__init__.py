"""Supervised classifiers: naive Bayes, maximum entropy, one-vs-rest linear SVM."""
import math

from .data import LabeledSet, TrainConfig, argmax_lowest
from .maxent import MaxEntModel, maxent_predict, maxent_predict_many, maxent_train
from .metrics import Metrics, evaluate
from .model_io import load_model, save_model
from .naive_bayes import NBModel, nb_predict, nb_predict_many, nb_train
from .svm import SVMModel, svm_predict, svm_predict_many, svm_train

KINDS = ("nb", "maxent", "svm")


def train(kind: str, data: LabeledSet, cfg: TrainConfig = TrainConfig(), smoothing: float = 1.0):
    if kind == "nb":
        return nb_train(data, smoothing)
    if kind == "maxent":
        return maxent_train(data, cfg)
    if kind == "svm":
        return svm_train(data, cfg)
    raise ValueError(f"unknown classifier kind {kind!r}; expected one of {KINDS}")


def predict_many(model, vectors):
    """[(category index, scores)] where scores are posteriors (nb, maxent) or margins (svm)."""
    if model.kind == "nb":
        return [(c, [math.exp(v) for v in lp]) for c, lp in nb_predict_many(model, vectors)]
    if model.kind == "maxent":
        return maxent_predict_many(model, vectors)
    return svm_predict_many(model, vectors)


def score_kind(model) -> str:
    return "margin" if model.kind == "svm" else "posterior"


__all__ = [
    "KINDS", "LabeledSet", "TrainConfig", "Metrics", "NBModel", "MaxEntModel", "SVMModel",
    "argmax_lowest", "evaluate", "load_model", "save_model", "train", "predict_many", "score_kind",
    "nb_train", "nb_predict", "nb_predict_many", "maxent_train", "maxent_predict",
    "maxent_predict_many", "svm_train", "svm_predict", "svm_predict_many",
]
