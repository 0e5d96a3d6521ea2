"""Softmax head and categorical cross-entropy."""
import numpy as np

from ..exceptions import KernelError, LabelRangeError
from ..tensor import Tensor

PROBABILITY_FLOOR = 1e-12


def softmax(logits: Tensor) -> Tensor:
    """Row-wise softmax over the last axis, stable for large logits."""
    if logits.shape[-1] < 1:
        raise KernelError("softmax needs at least one class")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def one_hot(labels, n_classes: int, dtype=np.float64) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise LabelRangeError(f"labels must be a 1-D index vector, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise LabelRangeError(f"labels must lie in [0, {n_classes - 1}], got {labels.min()}..{labels.max()}")
    encoded = np.zeros((labels.size, n_classes), dtype=dtype)
    encoded[np.arange(labels.size), labels] = 1
    return encoded


def cross_entropy(probabilities: Tensor, labels):
    """Batch-mean loss and its gradient with respect to the pre-softmax logits.

    ``labels`` is either a vector of class indices or a one-hot matrix. The
    gradient is ``(p − y) / B``.
    """
    probabilities = np.asarray(probabilities)
    batch, n_classes = probabilities.shape
    labels = np.asarray(labels)
    if labels.ndim == 2:
        if labels.shape != probabilities.shape:
            raise LabelRangeError(f"one-hot labels {labels.shape} do not match probabilities {probabilities.shape}")
        target = labels.astype(probabilities.dtype)
    else:
        target = one_hot(labels, n_classes, dtype=probabilities.dtype)
        if target.shape[0] != batch:
            raise LabelRangeError(f"{target.shape[0]} labels for a batch of {batch}")

    p_true = (probabilities * target).sum(axis=1)
    loss = float(np.mean(-np.log(np.maximum(p_true, PROBABILITY_FLOOR))))
    grad_logits = (probabilities - target) / batch
    return loss, grad_logits
