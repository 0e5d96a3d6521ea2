"""
Accuracy, confusion matrices and the confused-pair / top-action analysis.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .classes import class_label
from .exceptions import EmptyTestSetError

logger = logging.getLogger(__name__)


@dataclass
class ConfusionMatrix:
    """Counts with rows = true class and columns = predicted class."""

    counts: np.ndarray

    @classmethod
    def empty(cls, n_classes: int) -> "ConfusionMatrix":
        return cls(np.zeros((n_classes, n_classes), dtype=np.int64))

    @classmethod
    def from_predictions(cls, true, predicted, n_classes: int) -> "ConfusionMatrix":
        true = np.asarray(true, dtype=np.int64)
        predicted = np.asarray(predicted, dtype=np.int64)
        counts = np.zeros((n_classes, n_classes), dtype=np.int64)
        np.add.at(counts, (true, predicted), 1)
        return cls(counts)

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.counts + other.counts)

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts) / self.total) if self.total else float('nan')

    def per_class_accuracy(self) -> np.ndarray:
        """Diagonal over row sums; NaN for classes absent from the test set."""
        rows = self.row_sums
        with np.errstate(invalid='ignore', divide='ignore'):
            return np.where(rows > 0, np.diag(self.counts) / np.maximum(rows, 1), np.nan)


@dataclass
class EvaluationResult:
    accuracy: float
    per_class: np.ndarray
    confusion: ConfusionMatrix


@dataclass(frozen=True)
class ConfusedPair:
    true_class: int
    predicted_class: int
    accuracy: float
    label: str


def evaluate(model, test_set, batch_size: int = 12, prefetch: int = 0) -> EvaluationResult:
    """Infer-mode predictions over ``test_set`` in eval sampling mode.

    ``model`` only needs ``predict(batch)`` and ``n_classes``. Each batch gives
    its own confusion matrix; they are summed at the end.
    """
    if len(test_set) == 0:
        raise EmptyTestSetError("test set is empty")
    confusion = ConfusionMatrix.empty(model.n_classes)
    for batch in test_set.iter_batches(batch_size, 'eval', prefetch=prefetch):
        predicted = np.argmax(model.predict(batch.clips), axis=1)
        confusion = confusion + ConfusionMatrix.from_predictions(batch.labels, predicted, model.n_classes)
    logger.info(f"Evaluated {confusion.total} clips: accuracy {confusion.accuracy:.4f}")
    return EvaluationResult(confusion.accuracy, confusion.per_class_accuracy(), confusion)


def confused_pairs(confusion: ConfusionMatrix, k: int = 10, names: Optional[Sequence[str]] = None) -> List[ConfusedPair]:
    """The ``k`` least accurate classes, each with its most frequent wrong prediction.

    Ranked by ascending true-class accuracy, ties by class index. Classes never
    mistaken (or absent from the test set) have no pair.
    """
    counts = confusion.counts
    accuracy = confusion.per_class_accuracy()
    pairs = []
    for true_class in range(confusion.n_classes):
        off_diagonal = counts[true_class].copy()
        off_diagonal[true_class] = 0
        if np.isnan(accuracy[true_class]) or off_diagonal.sum() == 0:
            continue
        predicted = int(np.argmax(off_diagonal))
        label = (
            f"{class_label(true_class, names)} → {class_label(predicted, names)} "
            f"({100 * accuracy[true_class]:.2f}%)"
        )
        pairs.append(ConfusedPair(true_class, predicted, float(accuracy[true_class]), label))
    pairs.sort(key=lambda pair: (pair.accuracy, pair.true_class))
    return pairs[:k]


def top_recognized(confusion: ConfusionMatrix, k: int = 10, names: Optional[Sequence[str]] = None) -> List[tuple]:
    """``(class index, label, accuracy)`` of the ``k`` most accurate classes, ties by class index."""
    accuracy = confusion.per_class_accuracy()
    present = [c for c in range(confusion.n_classes) if not np.isnan(accuracy[c])]
    present.sort(key=lambda c: (-accuracy[c], c))
    return [(c, class_label(c, names), float(accuracy[c])) for c in present[:k]]
