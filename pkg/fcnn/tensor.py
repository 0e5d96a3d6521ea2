"""
Dense tensor helpers shared by every kernel.

Tensors are plain ``numpy.ndarray`` objects in row-major order, laid out as
``batch × height × width × time × channel`` (2D activations drop the time
axis). Parameters and activations are 32-bit; gradient checks switch the
whole engine to 64-bit with :func:`float64_mode`.
"""
import logging
import math
from contextlib import contextmanager
from typing import Sequence, Union

import numpy as np

from .exceptions import TensorAxisError, TensorShapeError

logger = logging.getLogger(__name__)

Tensor = np.ndarray
Shape = Sequence[int]

MAX_RANK = 5

_compute_dtype = np.float32


def compute_dtype():
    """Floating point type used for newly created parameters and activations."""
    return _compute_dtype


@contextmanager
def float64_mode():
    """Temporarily create all tensors in 64-bit precision (finite-difference checks)."""
    global _compute_dtype
    previous = _compute_dtype
    _compute_dtype = np.float64
    try:
        yield
    finally:
        _compute_dtype = previous


def validate_shape(shape: Shape) -> tuple:
    shape = tuple(int(extent) for extent in shape)
    if not 1 <= len(shape) <= MAX_RANK:
        raise TensorShapeError(f"rank must be between 1 and {MAX_RANK}, got {len(shape)}")
    if any(extent < 1 for extent in shape):
        raise TensorShapeError(f"every extent must be >= 1, got {shape}")
    return shape


def strides(shape: Shape) -> tuple:
    """Element strides of a row-major tensor; always derived from the shape."""
    shape = validate_shape(shape)
    out = [1] * len(shape)
    for axis in range(len(shape) - 2, -1, -1):
        out[axis] = out[axis + 1] * shape[axis + 1]
    return tuple(out)


def flat_index(shape: Shape, index: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(index), validate_shape(shape)))


def create(shape: Shape, fill: Union[float, Sequence[float], np.ndarray] = 0.0, dtype=None) -> Tensor:
    """Create a tensor filled with a scalar or copied from a flat row-major buffer."""
    shape = validate_shape(shape)
    dtype = dtype or compute_dtype()
    if np.isscalar(fill):
        return np.full(shape, fill, dtype=dtype)

    buffer = np.asarray(fill, dtype=dtype).ravel()
    if buffer.size != math.prod(shape):
        raise TensorShapeError(
            f"buffer holds {buffer.size} elements but shape {shape} needs {math.prod(shape)}"
        )
    return buffer.reshape(shape).copy()


def _check_same_shape(a: Tensor, b: Tensor):
    if a.shape != b.shape:
        raise TensorShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


ELEMENTWISE_OPS = {
    'add': np.add,
    'sub': np.subtract,
    'mul': np.multiply,
    'scale': np.multiply,
    'max': np.maximum,
    'max-with-scalar': np.maximum,
}
SCALAR_ONLY_OPS = {'scale', 'max', 'max-with-scalar'}


def elementwise(op: str, a: Tensor, b: Union[Tensor, float]) -> Tensor:
    """Apply ``op`` positionally; the only broadcast allowed is against a scalar."""
    try:
        ufunc = ELEMENTWISE_OPS[op]
    except KeyError:
        raise ValueError(f"unknown elementwise op {op!r}") from None

    a = np.asarray(a)
    if np.isscalar(b):
        return ufunc(a, np.asarray(b, dtype=a.dtype))
    if op in SCALAR_ONLY_OPS:
        raise TensorShapeError(f"{op} takes a scalar operand")
    b = np.asarray(b)
    _check_same_shape(a, b)
    return ufunc(a, b)


def _normalize_axes(axes, rank: int) -> tuple:
    if axes is None:
        return tuple(range(rank))
    if isinstance(axes, (int, np.integer)):
        axes = (axes,)
    normalized = []
    for axis in axes:
        if not -rank <= axis < rank:
            raise TensorAxisError(f"axis {axis} is invalid for rank {rank}")
        normalized.append(axis % rank)
    if len(set(normalized)) != len(normalized):
        raise TensorAxisError(f"repeated axis in {tuple(axes)}")
    return tuple(sorted(normalized))


def reduce(op: str, x: Tensor, axes=None) -> Tensor:
    """Reduce over ``axes`` (all when None); reduced axes are removed from the shape.

    ``argmax`` works over a single axis and breaks ties toward the lowest index.
    """
    x = np.asarray(x)
    axes = _normalize_axes(axes, x.ndim)
    if op == 'sum':
        return np.sum(x, axis=axes)
    if op == 'mean':
        return np.mean(x, axis=axes)
    if op == 'max':
        return np.max(x, axis=axes)
    if op == 'argmax':
        if len(axes) != 1:
            raise TensorAxisError("argmax reduces exactly one axis")
        return np.argmax(x, axis=axes[0])
    raise ValueError(f"unknown reduction {op!r}")


def reshape(x: Tensor, new_shape: Shape) -> Tensor:
    """Change shape metadata only; the row-major element order is untouched."""
    new_shape = validate_shape(new_shape)
    if math.prod(new_shape) != x.size:
        raise TensorShapeError(f"cannot reshape {x.shape} ({x.size} elements) to {new_shape}")
    return np.reshape(x, new_shape)
