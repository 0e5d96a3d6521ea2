"""Max pooling with ceil-mode extents, and global average pooling."""
from dataclasses import dataclass

import numpy as np

from ..exceptions import KernelError, MissingCacheError
from ..tensor import Tensor
from .windows import crop, pooled_extent, window_slice


@dataclass
class MaxPoolCache:
    winners: np.ndarray
    input_shape: tuple
    size: tuple
    strides: tuple
    pads: list


def maxpool_output_extents(in_extents, size, strides, ceil_mode: bool = True) -> tuple:
    return tuple(pooled_extent(n, k, s, ceil_mode) for n, k, s in zip(in_extents, size, strides))


def maxpool_forward(x: Tensor, size=(3, 3, 3), strides=None, ceil_mode: bool = True):
    """Window maxima over every spatial axis of a ``B × spatial × C`` tensor.

    Cells past the ragged edge of a ceil-mode window are padded with ``-inf`` so
    they never win. The cache records, per output, which kernel offset won;
    ties go to the first offset in scan order.
    """
    size = tuple(int(k) for k in size)
    strides = size if strides is None else tuple(int(s) for s in strides)
    if x.ndim != len(size) + 2:
        raise KernelError(f"pooling window {size} does not fit input of shape {x.shape}")

    in_extents = x.shape[1:-1]
    out_extents = maxpool_output_extents(in_extents, size, strides, ceil_mode)
    pads = [
        (0, max((o - 1) * s + k - n, 0))
        for n, o, k, s in zip(in_extents, out_extents, size, strides)
    ]
    xpad = np.pad(x, [(0, 0)] + pads + [(0, 0)], constant_values=-np.inf)

    best = None
    winners = np.zeros((x.shape[0],) + out_extents + (x.shape[-1],), dtype=np.int32)
    for position, offset in enumerate(np.ndindex(*size)):
        window = xpad[window_slice(offset, out_extents, strides)]
        if best is None:
            best = window.copy()
            continue
        better = window > best
        best[better] = window[better]
        winners[better] = position

    return best, MaxPoolCache(winners, x.shape, size, strides, pads)


def maxpool_backward(grad_out: Tensor, cache: MaxPoolCache) -> Tensor:
    """Route every output gradient to the input cell that won its window."""
    if cache is None:
        raise MissingCacheError("max pooling backward needs the forward cache")
    if grad_out.shape != cache.winners.shape:
        raise KernelError(f"gradient shape {grad_out.shape} does not match pooled output {cache.winners.shape}")

    padded_shape = (cache.input_shape[0],) + tuple(
        n + after for n, (_, after) in zip(cache.input_shape[1:-1], cache.pads)
    ) + (cache.input_shape[-1],)
    out_extents = grad_out.shape[1:-1]

    grad_xpad = np.zeros(padded_shape, dtype=grad_out.dtype)
    for position, offset in enumerate(np.ndindex(*cache.size)):
        routed = np.where(cache.winners == position, grad_out, 0)
        grad_xpad[window_slice(offset, out_extents, cache.strides)] += routed
    return crop(grad_xpad, cache.pads)


def maxpool3d_forward(x: Tensor, size=(3, 3, 3), stride=None, ceil_mode: bool = True):
    return maxpool_forward(x, size, stride, ceil_mode)


def maxpool3d_backward(grad_out: Tensor, cache: MaxPoolCache) -> Tensor:
    return maxpool_backward(grad_out, cache)


def global_avgpool2d(x: Tensor) -> Tensor:
    """Mean over the two spatial axes of ``B × H × W × C``."""
    if x.ndim != 4:
        raise KernelError(f"global average pooling expects B×H×W×C, got shape {x.shape}")
    return x.mean(axis=(1, 2))


def global_avgpool2d_backward(grad_out: Tensor, input_shape) -> Tensor:
    _, height, width, _ = input_shape
    spread = grad_out / (height * width)
    return np.broadcast_to(spread[:, None, None, :], tuple(input_shape)).copy()
