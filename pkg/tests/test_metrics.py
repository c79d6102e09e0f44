import pytest

from hca.classify import evaluate
from hca.errors import ValidationError


def test_perfect():
    m = evaluate([0, 1, 2, 1], [0, 1, 2, 1], 3)
    assert m.accuracy == 1.0 and m.macro_f1 == 1.0
    assert m.confusion == [[1, 0, 0], [0, 2, 0], [0, 0, 1]]


def test_hand_computed():
    # gold 0 0 1 1, predicted 0 1 1 1
    m = evaluate([0, 1, 1, 1], [0, 0, 1, 1], 2)
    assert m.accuracy == 0.75
    assert m.precision == [1.0, 2 / 3]
    assert m.recall == [0.5, 1.0]
    assert m.f1 == pytest.approx([2 / 3, 0.8])
    assert m.macro_f1 == pytest.approx((2 / 3 + 0.8) / 2)
    assert m.confusion == [[1, 1], [0, 2]]


def test_absent_class_scores_zero():
    m = evaluate([0, 0], [0, 0], 2)
    assert m.precision[1] == m.recall[1] == m.f1[1] == 0.0


def test_errors():
    with pytest.raises(ValidationError):
        evaluate([0], [0, 1], 2)
    with pytest.raises(ValidationError):
        evaluate([], [], 2)
    with pytest.raises(ValidationError):
        evaluate([2], [0], 2)


def test_json_names():
    out = evaluate([0], [0], 1).to_json(["a"])
    assert out["categories"] == ["a"] and out["accuracy"] == 1.0


def test_all_predicted_zero_half_gold():
    m = evaluate([0, 0, 0, 0], [0, 0, 1, 1], 2)
    assert m.accuracy == 0.5
    assert m.recall == [1.0, 0.0]
