import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qml_diabench.errors import EmptyMatrix, LengthMismatch, NonBinary
from qml_diabench.metrics import ConfusionMatrix, compute_metrics, confusion, evaluate


def test_confusion_all_ones():
    assert confusion(np.ones(10), np.ones(10)) == ConfusionMatrix(10, 0, 0, 0)


def test_confusion_total_disagreement():
    y = np.array([0, 1, 1, 0, 1])
    c = confusion(y, 1 - y)
    assert c.tp == 0 and c.tn == 0 and c.total == 5


def test_confusion_hand_count():
    c = confusion([1, 1, 1, 0, 0, 0, 1, 0], [1, 0, 1, 0, 1, 0, 0, 0])
    assert c == ConfusionMatrix(tp=2, fp=1, fn=2, tn=3)


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion([0, 1], [0])
    with pytest.raises(NonBinary):
        confusion([0, 2], [0, 1])


def test_perfect():
    m = compute_metrics(ConfusionMatrix(50, 0, 0, 50))
    assert (m.precision, m.recall, m.f1, m.balanced_accuracy) == (1.0, 1.0, 1.0, 1.0)


def test_mixed_case():
    m = compute_metrics(ConfusionMatrix(tp=40, fp=10, fn=20, tn=30))
    assert m.precision == pytest.approx(0.8)
    assert m.recall == pytest.approx(2 / 3)
    assert m.f1 == pytest.approx(2 * 0.8 * (2 / 3) / (0.8 + 2 / 3))
    assert m.balanced_accuracy == pytest.approx((2 / 3 + 0.75) / 2)


def test_all_negative_predictor():
    m = compute_metrics(ConfusionMatrix(tp=0, fp=0, fn=5, tn=5))
    assert (m.precision, m.recall, m.f1, m.balanced_accuracy) == (0.0, 0.0, 0.0, 0.5)


def test_empty_matrix():
    with pytest.raises(EmptyMatrix):
        compute_metrics(ConfusionMatrix(0, 0, 0, 0))


labels = st.lists(st.integers(0, 1), min_size=1, max_size=60)


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_metric_properties(data):
    t = np.array(data.draw(labels))
    p = np.array(data.draw(st.lists(st.integers(0, 1), min_size=len(t), max_size=len(t))))
    m = evaluate(t, p)
    assert all(0 <= v <= 1 for v in m.as_dict().values())
    swapped = evaluate(1 - t, 1 - p)
    both_classes = 0 < t.sum() < len(t)
    if both_classes:
        assert swapped.balanced_accuracy == pytest.approx(m.balanced_accuracy)
    if m.precision > 0 and m.recall > 0:
        assert min(m.precision, m.recall) - 1e-12 <= m.f1 <= max(m.precision, m.recall) + 1e-12
