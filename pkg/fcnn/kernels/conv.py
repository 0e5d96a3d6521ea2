"""
Convolution kernels over ``B × spatial × C`` tensors.

One implementation serves 2D (``B×H×W×C``) and 3D (``B×H×W×T×C``) inputs: for
every kernel offset the strided input window is multiplied by that offset's
``Cin × Cout`` weight slice and accumulated. Weights are laid out
``kernel extents × Cin × Cout``.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import KernelError
from ..state import LayerState
from ..tensor import Tensor
from .windows import PADDINGS, crop, same_padding, valid_extent, window_slice

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvSpec:
    kernel: tuple
    strides: tuple
    padding: str
    in_channels: int
    out_channels: int

    def __post_init__(self):
        object.__setattr__(self, 'kernel', tuple(int(k) for k in self.kernel))
        object.__setattr__(self, 'strides', tuple(int(s) for s in self.strides))
        if len(self.kernel) not in (2, 3) or len(self.strides) != len(self.kernel):
            raise KernelError(f"kernel {self.kernel} and strides {self.strides} must both have 2 or 3 axes")
        if any(k < 1 for k in self.kernel) or any(s < 1 for s in self.strides):
            raise KernelError("kernel extents and strides must be positive")
        if self.padding not in PADDINGS:
            raise KernelError(f"padding must be one of {PADDINGS}, got {self.padding!r}")
        if self.in_channels < 1 or self.out_channels < 1:
            raise KernelError("channel counts must be positive")

    @property
    def rank(self) -> int:
        return len(self.kernel)

    @property
    def weight_shape(self) -> tuple:
        return self.kernel + (self.in_channels, self.out_channels)

    @property
    def parameter_count(self) -> int:
        return int(np.prod(self.weight_shape)) + self.out_channels

    def pads(self, in_extents) -> list:
        if self.padding == 'valid':
            return [(0, 0)] * self.rank
        return [same_padding(n, k, s) for n, k, s in zip(in_extents, self.kernel, self.strides)]

    def output_extents(self, in_extents) -> tuple:
        in_extents = tuple(in_extents)
        if len(in_extents) != self.rank:
            raise KernelError(f"expected {self.rank} spatial axes, got {len(in_extents)}")
        return tuple(
            valid_extent(n + before + after, k, s)
            for n, (before, after), k, s in zip(in_extents, self.pads(in_extents), self.kernel, self.strides)
        )

    def output_shape(self, input_shape) -> tuple:
        return (input_shape[0],) + self.output_extents(input_shape[1:-1]) + (self.out_channels,)


def _check_input(x: Tensor, spec: ConvSpec):
    if x.ndim != spec.rank + 2:
        raise KernelError(f"conv{spec.rank}d expects a rank-{spec.rank + 2} input, got shape {x.shape}")
    if x.shape[-1] != spec.in_channels:
        raise KernelError(f"input has {x.shape[-1]} channels, layer expects {spec.in_channels}")


def _pad(x: Tensor, pads) -> Tensor:
    if not any(before or after for before, after in pads):
        return x
    return np.pad(x, [(0, 0)] + list(pads) + [(0, 0)])


def conv_forward(x: Tensor, spec: ConvSpec, weights: Tensor, bias: Tensor) -> Tensor:
    _check_input(x, spec)
    if weights.shape != spec.weight_shape:
        raise KernelError(f"weights have shape {weights.shape}, layer expects {spec.weight_shape}")

    pads = spec.pads(x.shape[1:-1])
    out_extents = spec.output_extents(x.shape[1:-1])
    xpad = _pad(x, pads)

    dtype = np.result_type(x.dtype, weights.dtype)
    out = np.zeros((x.shape[0],) + out_extents + (spec.out_channels,), dtype=dtype)
    for offset in np.ndindex(*spec.kernel):
        out += xpad[window_slice(offset, out_extents, spec.strides)] @ weights[offset]
    out += bias
    return out


def conv_backward(grad_out: Tensor, x: Tensor, spec: ConvSpec, weights: Tensor):
    """Gradients ``(grad_x, grad_w, grad_b)`` of a convolution given its upstream gradient."""
    _check_input(x, spec)
    expected = spec.output_shape(x.shape)
    if grad_out.shape != expected:
        raise KernelError(f"gradient shape {grad_out.shape} does not match forward output {expected}")

    pads = spec.pads(x.shape[1:-1])
    out_extents = expected[1:-1]
    xpad = _pad(x, pads)

    dtype = np.result_type(x.dtype, weights.dtype, grad_out.dtype)
    grad_xpad = np.zeros(xpad.shape, dtype=dtype)
    grad_w = np.zeros(weights.shape, dtype=dtype)
    grad_rows = grad_out.reshape(-1, spec.out_channels)

    for offset in np.ndindex(*spec.kernel):
        index = window_slice(offset, out_extents, spec.strides)
        window = xpad[index]
        grad_w[offset] = window.reshape(-1, spec.in_channels).T @ grad_rows
        grad_xpad[index] += (grad_rows @ weights[offset].T).reshape(window.shape)

    grad_b = grad_out.sum(axis=tuple(range(grad_out.ndim - 1)))
    return crop(grad_xpad, pads), grad_w, grad_b


def _require_rank(spec: ConvSpec, rank: int):
    if spec.rank != rank:
        raise KernelError(f"conv{rank}d needs a {rank}-axis kernel, got {spec.kernel}")


def conv3d_forward(x: Tensor, spec: ConvSpec, state: LayerState) -> Tensor:
    _require_rank(spec, 3)
    return conv_forward(x, spec, state.weights, state.bias)


def conv3d_backward(grad_out: Tensor, x: Tensor, spec: ConvSpec, state: LayerState):
    _require_rank(spec, 3)
    return conv_backward(grad_out, x, spec, state.weights)


def conv2d_forward(x: Tensor, spec: ConvSpec, state: LayerState) -> Tensor:
    _require_rank(spec, 2)
    return conv_forward(x, spec, state.weights, state.bias)


def conv2d_backward(grad_out: Tensor, x: Tensor, spec: ConvSpec, state: LayerState):
    _require_rank(spec, 2)
    return conv_backward(grad_out, x, spec, state.weights)
