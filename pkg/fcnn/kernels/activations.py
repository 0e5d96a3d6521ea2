"""Leaky ReLU and inverted dropout."""
import numpy as np

from ..exceptions import KernelError
from ..tensor import Tensor

DEFAULT_ALPHA = 0.3


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise KernelError(f"leaky ReLU slope must be in (0, 1), got {alpha}")


def leaky_relu(x: Tensor, alpha: float = DEFAULT_ALPHA) -> Tensor:
    _check_alpha(alpha)
    return np.where(x >= 0, x, x * x.dtype.type(alpha))


def leaky_relu_backward(grad_out: Tensor, x: Tensor, alpha: float = DEFAULT_ALPHA) -> Tensor:
    _check_alpha(alpha)
    return np.where(x >= 0, grad_out, grad_out * grad_out.dtype.type(alpha))


def dropout(x: Tensor, rate: float, mode: str, rng: np.random.Generator = None):
    """Inverted dropout; returns ``(out, keep_mask)``.

    Infer mode and ``rate == 0`` hand back ``x`` itself with no mask. Train mode
    keeps each element with probability ``1 − rate`` and scales survivors by
    ``1 / (1 − rate)``.
    """
    if not 0.0 <= rate < 1.0:
        raise KernelError(f"dropout rate must be in [0, 1), got {rate}")
    if mode == 'infer' or rate == 0.0:
        return x, None
    if mode != 'train':
        raise KernelError(f"unknown mode {mode!r}")
    if rng is None:
        raise KernelError("train-mode dropout needs a seeded random generator")

    keep = rng.random(x.shape) >= rate
    scale = x.dtype.type(1.0 / (1.0 - rate))
    return np.where(keep, x * scale, x.dtype.type(0)), keep


def dropout_backward(grad_out: Tensor, keep: np.ndarray, rate: float) -> Tensor:
    if keep is None:
        return grad_out
    scale = grad_out.dtype.type(1.0 / (1.0 - rate))
    return np.where(keep, grad_out * scale, grad_out.dtype.type(0))
