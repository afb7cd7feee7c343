"""Confusion matrix, precision, recall and F-score.

Grids are indexed ``counts[predicted][real]``.  Any 0/0 ratio is taken as 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: np.ndarray  # (predicted, real)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def index(self, cls: str) -> int:
        try:
            return self.classes.index(cls)
        except ValueError:
            raise KeyError(f"unknown class {cls!r}") from None

    def one_vs_rest(self, cls: str) -> tuple[int, int, int, int]:
        """``(TP, FP, FN, TN)`` for ``cls`` against every other class."""
        c = self.index(cls)
        tp = int(self.counts[c, c])
        fp = int(self.counts[c].sum()) - tp
        fn = int(self.counts[:, c].sum()) - tp
        return tp, fp, fn, self.total - tp - fp - fn


def confusion(pred: Sequence[str], real: Sequence[str], classes: Sequence[str]) -> ConfusionMatrix:
    if len(pred) != len(real):
        raise ValueError(f"{len(pred)} predictions for {len(real)} labels")
    if not pred:
        raise ValueError("nothing to evaluate")
    pos = {c: i for i, c in enumerate(classes)}
    grid = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for p, r in zip(pred, real):
        if p not in pos or r not in pos:
            raise ValueError(f"label {p if p not in pos else r!r} is not one of {list(classes)}")
        grid[pos[p], pos[r]] += 1
    return ConfusionMatrix(tuple(classes), grid)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def precision_recall(cm: ConfusionMatrix, cls: str) -> tuple[float, float]:
    tp, fp, fn, _ = cm.one_vs_rest(cls)
    return _ratio(tp, tp + fp), _ratio(tp, tp + fn)


def f_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall."""
    return _ratio(2 * precision * recall, precision + recall)


def macro_f(cm: ConfusionMatrix) -> float:
    return float(np.mean([f_score(*precision_recall(cm, c)) for c in cm.classes]))


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(float(np.trace(cm.counts)), cm.total)


@dataclass(frozen=True)
class ClassMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f: float


@dataclass(frozen=True)
class MetricsReport:
    confusion: ConfusionMatrix
    per_class: dict[str, ClassMetrics]
    macro_f: float
    accuracy: float

    def to_json(self) -> dict:
        return {
            "classes": list(self.confusion.classes),
            "confusion": {
                "orientation": "rows=predicted, columns=real",
                "counts": self.confusion.counts.tolist(),
            },
            "per_class": {
                c: {"tp": m.tp, "fp": m.fp, "fn": m.fn, "tn": m.tn,
                    "precision": round(m.precision, 6), "recall": round(m.recall, 6),
                    "f": round(m.f, 6)}
                for c, m in self.per_class.items()
            },
            "macro_f": round(self.macro_f, 6),
            "accuracy": round(self.accuracy, 6),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def report(pred: Sequence[str], real: Sequence[str], classes: Sequence[str]) -> MetricsReport:
    cm = confusion(pred, real, classes)
    per_class = {}
    for c in cm.classes:
        tp, fp, fn, tn = cm.one_vs_rest(c)
        p, r = precision_recall(cm, c)
        per_class[c] = ClassMetrics(tp, fp, fn, tn, p, r, f_score(p, r))
    return MetricsReport(cm, per_class, macro_f(cm), accuracy(cm))
