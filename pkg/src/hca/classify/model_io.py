"""Text model files.

Layout::

    hca-model <kind> <m> <V>
    categories<TAB>name_0<TAB>...<TAB>name_{m-1}
    <rows of tab-separated reals, 17 significant digits>

Rows per kind: nb = smoothing, log-priors, m likelihood rows; maxent =
bias, m lambda rows; svm = regularization, bias, m weight rows.
"""
from pathlib import Path

import numpy as np

from ..errors import InputFileError, ParseError, ValidationError
from .maxent import MaxEntModel
from .naive_bayes import NBModel
from .svm import SVMModel

MAGIC = "hca-model"
KINDS = ("nb", "maxent", "svm")


def _row(values) -> str:
    return "\t".join("%.17g" % float(v) for v in values)


def dumps(model) -> str:
    kind = model.kind
    m, V = model.m, model.V
    lines = [f"{MAGIC} {kind} {m} {V}", "\t".join(["categories", *model.category_names])]
    if kind == "nb":
        lines += [_row([model.smoothing]), _row(model.log_priors)]
        lines += [_row(r) for r in model.log_likelihoods]
    elif kind == "maxent":
        lines.append(_row(model.bias))
        lines += [_row(r) for r in model.lambdas]
    elif kind == "svm":
        lines += [_row([model.regularization]), _row(model.bias)]
        lines += [_row(r) for r in model.weights]
    else:
        raise ValidationError(f"unknown model kind {kind!r}")
    return "\n".join(lines) + "\n"


def save_model(model, path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8", newline="\n")


def loads(text: str, path="<string>"):
    lines = text.splitlines()
    if not lines:
        raise ParseError(path, 1, "empty model file")
    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != MAGIC or head[1] not in KINDS:
        raise ParseError(path, 1, f"expected '{MAGIC} <kind> <m> <V>'")
    kind = head[1]
    try:
        m, V = int(head[2]), int(head[3])
    except ValueError:
        raise ParseError(path, 1, "m and V must be integers") from None
    cats = lines[1].split("\t") if len(lines) > 1 else []
    if not cats or cats[0] != "categories" or len(cats) != m + 1:
        raise ParseError(path, 2, f"expected 'categories' followed by {m} names")
    names = cats[1:]

    def row(i, width):
        if i >= len(lines):
            raise ParseError(path, i + 1, "truncated model file")
        try:
            vals = [float(v) for v in lines[i].split("\t")]
        except ValueError:
            raise ParseError(path, i + 1, "non-numeric value") from None
        if len(vals) != width:
            raise ParseError(path, i + 1, f"expected {width} values, got {len(vals)}")
        return vals

    def matrix(start):
        return np.array([row(start + c, V) for c in range(m)], dtype=np.float64).reshape(m, V)

    if kind == "nb":
        expected = 4 + m
        model = NBModel(np.array(row(3, m)), matrix(4), row(2, 1)[0], names)
    elif kind == "maxent":
        expected = 3 + m
        model = MaxEntModel(matrix(3), np.array(row(2, m)), names)
    else:
        expected = 4 + m
        model = SVMModel(matrix(4), np.array(row(3, m)), row(2, 1)[0], names)
    if len(lines) != expected:
        raise ParseError(path, expected + 1, "trailing lines after model rows")
    return model


def load_model(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read model {path}: {exc.strerror or exc}") from None
    return loads(text, path)
