import math

import numpy as np
import pytest

from hca.classify import LabeledSet, TrainConfig, maxent_train, nb_train, svm_train
from hca.classify.model_io import dumps, load_model, loads, save_model
from hca.errors import InputFileError, ParseError
from hca.features import FeatureVector


def data():
    vecs = [FeatureVector("a", {0: 1, 1: 2}), FeatureVector("b", {2: 1}), FeatureVector("c", {1: 1, 3: 4})]
    return LabeledSet(vecs, [0, 1, 2], ["x", "y", "z"], 5)


def models():
    d, cfg = data(), TrainConfig(epochs=30, learning_rate=0.3, l2=0.01)
    return [nb_train(d, 1), nb_train(d, 0), maxent_train(d, cfg), svm_train(d, cfg)]


def arrays(model):
    if model.kind == "nb":
        return [model.log_priors, model.log_likelihoods, np.array([model.smoothing])]
    if model.kind == "maxent":
        return [model.lambdas, model.bias]
    return [model.weights, model.bias, np.array([model.regularization])]


@pytest.mark.parametrize("i", range(4))
def test_round_trip_exact(tmp_path, i):
    model = models()[i]
    path = tmp_path / "model.txt"
    save_model(model, path)
    back = load_model(path)
    assert back.kind == model.kind and back.category_names == model.category_names
    for a, b in zip(arrays(model), arrays(back)):
        assert np.array_equal(a, b)
    assert dumps(back) == path.read_text(encoding="utf-8")


def test_negative_infinity_survives():
    model = nb_train(data(), 0)
    assert math.isinf(model.log_likelihoods[0, 2])
    assert loads(dumps(model)).log_likelihoods[0, 2] == -math.inf


def test_header_layout():
    text = dumps(models()[0])
    lines = text.splitlines()
    assert lines[0] == "hca-model nb 3 5"
    assert lines[1] == "categories\tx\ty\tz"
    assert len(lines) == 4 + 3


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("hca-model tree 1 1\n", 1),
    ("hca-model nb 2 1\ncategories\ta\n", 2),
    ("hca-model maxent 1 2\ncategories\ta\n0\n1\n", 4),
    ("hca-model maxent 1 2\ncategories\ta\n0\n1\tzz\n", 4),
])
def test_malformed(text, line):
    with pytest.raises(ParseError) as exc:
        loads(text, "m.txt")
    assert exc.value.line_no == line


def test_missing_file(tmp_path):
    with pytest.raises(InputFileError):
        load_model(tmp_path / "nope.txt")
