"""Finite-difference helpers for the gradient tests."""
import numpy as np

EPSILON = 1e-6


def numerical_gradient(loss, array, indices, epsilon=EPSILON):
    """Central differences of ``loss()`` with respect to ``array`` at ``indices`` (perturbed in place)."""
    grads = []
    for index in indices:
        original = array[index]
        array[index] = original + epsilon
        plus = loss()
        array[index] = original - epsilon
        minus = loss()
        array[index] = original
        grads.append((plus - minus) / (2 * epsilon))
    return np.array(grads)


def sample_indices(shape, count, rng):
    """Up to ``count`` distinct multi-indices into an array of ``shape``."""
    size = int(np.prod(shape))
    flat = rng.choice(size, size=min(count, size), replace=False)
    return [np.unravel_index(i, shape) for i in flat]


def relative_error(analytic, numeric, floor=1e-6):
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    return np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), floor)
