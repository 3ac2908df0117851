"""Confusion-matrix evaluation for float and int8 models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import TinyModel
from .quant import QuantModel

AnyModel = Union[TinyModel, QuantModel]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed [true_class, predicted_class]."""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts) / self.counts.sum())

    def per_class_recall(self) -> np.ndarray:
        row_sums = self.counts.sum(axis=1)
        recall = np.zeros(len(self.counts))
        ok = row_sums > 0
        recall[ok] = np.diag(self.counts)[ok] / row_sums[ok]
        return recall

    def to_table(self, names: list[str] | None = None) -> str:
        n = len(self.counts)
        names = names or [str(i) for i in range(n)]
        width = max(6, max(len(s) for s in names) + 1)
        header = " " * width + "".join(f"{s:>{width}}" for s in names)
        rows = [header]
        for i, name in enumerate(names):
            rows.append(f"{name:>{width}}" + "".join(f"{c:>{width}}" for c in self.counts[i]))
        return "\n".join(rows)

    def to_csv(self) -> str:
        return "\n".join(",".join(str(int(c)) for c in row) for row in self.counts)


def evaluate(model: AnyModel, X: np.ndarray, y: np.ndarray) -> tuple[ConfusionMatrix, float]:
    """Confusion matrix and accuracy of a model over a labeled set.

    Argmax ties break toward the lowest class index, so evaluation is
    deterministic.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] == 0:
        raise ValueError("evaluation set must be non-empty")
    n_classes = model.n_classes
    probs = model.forward(X)
    pred = probs.argmax(axis=1)  # np.argmax already prefers the lowest index
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y, pred), 1)
    cm = ConfusionMatrix(counts)
    return cm, cm.accuracy
