"""Confusion counts and the four reported classification metrics."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptyMatrix, LengthMismatch, NonBinary

METRIC_NAMES = ("precision", "recall", "f1", "balanced_accuracy")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsRecord:
    precision: float
    recall: float
    f1: float
    balanced_accuracy: float

    def as_dict(self) -> dict:
        return asdict(self)


def confusion(y_true, y_pred) -> ConfusionMatrix:
    t = np.asarray(y_true).ravel()
    p = np.asarray(y_pred).ravel()
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.size} true labels vs {p.size} predictions")
    for v in (t, p):
        if not np.all((v == 0) | (v == 1)):
            raise NonBinary("labels must be 0 or 1")
    t = t.astype(bool)
    p = p.astype(bool)
    return ConfusionMatrix(
        tp=int(np.sum(t & p)),
        fp=int(np.sum(~t & p)),
        fn=int(np.sum(t & ~p)),
        tn=int(np.sum(~t & ~p)),
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def compute_metrics(c: ConfusionMatrix) -> MetricsRecord:
    """Precision, recall, F1 and balanced accuracy; any 0/0 ratio is taken as 0."""
    if c.total == 0:
        raise EmptyMatrix("confusion matrix has no samples")
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    specificity = _ratio(c.tn, c.tn + c.fp)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricsRecord(precision, recall, f1, (recall + specificity) / 2)


def evaluate(y_true, y_pred) -> MetricsRecord:
    return compute_metrics(confusion(y_true, y_pred))
