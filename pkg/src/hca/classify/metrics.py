"""Confusion-matrix metrics."""
from dataclasses import asdict, dataclass
from typing import List, Sequence

from ..errors import ValidationError


@dataclass
class Metrics:
    accuracy: float
    precision: List[float]
    recall: List[float]
    f1: List[float]
    macro_f1: float
    confusion: List[List[int]]  # confusion[gold][predicted]

    def to_json(self, names: Sequence[str] = ()) -> dict:
        out = asdict(self)
        if names:
            out["categories"] = list(names)
        return out


def _ratio(num, den):
    return num / den if den else 0.0


def evaluate(predicted: Sequence[int], gold: Sequence[int], m: int) -> Metrics:
    if len(predicted) != len(gold):
        raise ValidationError(f"{len(predicted)} predictions vs {len(gold)} gold labels")
    if not gold:
        raise ValidationError("cannot evaluate zero predictions")
    if m < 1:
        raise ValidationError("m must be >= 1")
    confusion = [[0] * m for _ in range(m)]
    for p, g in zip(predicted, gold):
        if not (0 <= p < m and 0 <= g < m):
            raise ValidationError(f"label pair ({g}, {p}) outside [0, {m})")
        confusion[g][p] += 1
    total = len(gold)
    correct = sum(confusion[c][c] for c in range(m))
    precision, recall, f1 = [], [], []
    for c in range(m):
        tp = confusion[c][c]
        predicted_c = sum(confusion[g][c] for g in range(m))
        gold_c = sum(confusion[c])
        p = _ratio(tp, predicted_c)
        r = _ratio(tp, gold_c)
        precision.append(p)
        recall.append(r)
        f1.append(_ratio(2 * p * r, p + r))
    return Metrics(correct / total, precision, recall, f1, sum(f1) / m, confusion)
