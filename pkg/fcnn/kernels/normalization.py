"""Batch normalization over every non-channel axis."""
from dataclasses import dataclass

import numpy as np

from ..exceptions import KernelError, MissingCacheError
from ..state import LayerState
from ..tensor import Tensor

MODES = ('train', 'infer')


@dataclass
class BatchNormCache:
    xhat: Tensor
    inv_std: Tensor
    gamma: Tensor
    mode: str


def _check(x: Tensor, state: LayerState, mode: str):
    if mode not in MODES:
        raise KernelError(f"mode must be one of {MODES}, got {mode!r}")
    if state.gamma is None:
        raise KernelError("batch normalization state has no gamma/beta")
    if x.shape[-1] != state.gamma.shape[0]:
        raise KernelError(f"input has {x.shape[-1]} channels, layer normalizes {state.gamma.shape[0]}")


def batch_statistics(x: Tensor):
    """Biased per-channel mean and variance over batch and all spatial/temporal axes."""
    axes = tuple(range(x.ndim - 1))
    return x.mean(axis=axes), x.var(axis=axes)


def batchnorm_forward(x: Tensor, state: LayerState, mode: str = 'train', update_stats: bool = True):
    """Normalize ``x`` and return ``(out, cache)``.

    Train mode uses batch statistics and, when ``update_stats`` is set, folds them
    into the running statistics in place:
    ``running = momentum · running + (1 − momentum) · batch``.
    Infer mode uses the running statistics and never mutates ``state``.
    """
    _check(x, state, mode)
    if mode == 'train':
        mean, var = batch_statistics(x)
        if update_stats:
            m = state.momentum
            state.running_mean[...] = m * state.running_mean + (1.0 - m) * mean
            state.running_var[...] = m * state.running_var + (1.0 - m) * var
    else:
        mean, var = state.running_mean, state.running_var

    inv_std = 1.0 / np.sqrt(var + state.epsilon)
    xhat = (x - mean) * inv_std
    out = state.gamma * xhat + state.beta
    return out.astype(x.dtype, copy=False), BatchNormCache(xhat, inv_std, state.gamma, mode)


def batchnorm_backward(grad_out: Tensor, cache: BatchNormCache):
    """Gradients ``(grad_x, grad_gamma, grad_beta)``."""
    if cache is None:
        raise MissingCacheError("batch normalization backward needs the forward cache")
    if grad_out.shape != cache.xhat.shape:
        raise KernelError(f"gradient shape {grad_out.shape} does not match forward output {cache.xhat.shape}")

    axes = tuple(range(grad_out.ndim - 1))
    grad_beta = grad_out.sum(axis=axes)
    grad_gamma = (grad_out * cache.xhat).sum(axis=axes)
    grad_xhat = grad_out * cache.gamma

    if cache.mode == 'infer':
        return grad_xhat * cache.inv_std, grad_gamma, grad_beta

    count = grad_out.size // grad_out.shape[-1]
    grad_x = (cache.inv_std / count) * (
        count * grad_xhat
        - grad_xhat.sum(axis=axes)
        - cache.xhat * (grad_xhat * cache.xhat).sum(axis=axes)
    )
    return grad_x, grad_gamma, grad_beta
