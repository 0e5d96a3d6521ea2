"""
Layer objects wrapping the pure kernels with their state.

Every layer exposes ``output_shape``, ``forward(x, mode, rng) -> (y, cache)`` and
``backward(grad, cache) -> (grad_x, grads)`` where ``grads`` maps parameter
field names to gradients (empty for parameter-free layers).
"""
import logging
from typing import Dict, Optional, Tuple

import numpy as np

from .exceptions import KernelError, MissingCacheError
from .kernels import (
    ConvSpec,
    batchnorm_backward,
    batchnorm_forward,
    conv_backward,
    conv_forward,
    dropout,
    dropout_backward,
    global_avgpool2d,
    global_avgpool2d_backward,
    leaky_relu,
    leaky_relu_backward,
    maxpool_backward,
    maxpool_forward,
    softmax,
)
from .kernels.pooling import maxpool_output_extents
from .state import LayerState
from .tensor import Tensor, reshape

logger = logging.getLogger(__name__)


class Layer:
    kind = 'layer'

    def __init__(self, name: str, state: Optional[LayerState] = None):
        self.name = name
        self.state = state

    @property
    def has_parameters(self) -> bool:
        return self.state is not None and bool(self.state.parameters())

    @property
    def trainable(self) -> bool:
        return self.has_parameters and self.state.trainable

    def parameters(self) -> Dict[str, Tensor]:
        return self.state.parameters() if self.state is not None else {}

    def buffers(self) -> Dict[str, Tensor]:
        return self.state.buffers() if self.state is not None else {}

    def output_shape(self, input_shape: tuple) -> tuple:
        return tuple(input_shape)

    def forward(self, x: Tensor, mode: str, rng=None) -> Tuple[Tensor, object]:
        raise NotImplementedError

    def backward(self, grad: Tensor, cache) -> Tuple[Tensor, Dict[str, Tensor]]:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class Convolution(Layer):
    kind = 'conv'

    def __init__(self, name: str, spec: ConvSpec, state: LayerState):
        super().__init__(name, state)
        self.spec = spec

    def output_shape(self, input_shape):
        return self.spec.output_shape(input_shape)

    def forward(self, x, mode, rng=None):
        return conv_forward(x, self.spec, self.state.weights, self.state.bias), x

    def backward(self, grad, cache):
        if cache is None:
            raise MissingCacheError(f"{self.name}: no forward input cached")
        grad_x, grad_w, grad_b = conv_backward(grad, cache, self.spec, self.state.weights)
        return grad_x, {'weights': grad_w, 'bias': grad_b}


class BatchNorm(Layer):
    """Batch normalization; a frozen layer normalizes with running statistics even in train mode."""

    kind = 'batchnorm'

    def forward(self, x, mode, rng=None):
        effective = mode if self.state.trainable else 'infer'
        return batchnorm_forward(x, self.state, effective)

    def backward(self, grad, cache):
        grad_x, grad_gamma, grad_beta = batchnorm_backward(grad, cache)
        return grad_x, {'gamma': grad_gamma, 'beta': grad_beta}


class LeakyReLU(Layer):
    kind = 'activation'

    def __init__(self, name: str, alpha: float):
        super().__init__(name)
        self.alpha = alpha

    def forward(self, x, mode, rng=None):
        return leaky_relu(x, self.alpha), x

    def backward(self, grad, cache):
        if cache is None:
            raise MissingCacheError(f"{self.name}: no forward input cached")
        return leaky_relu_backward(grad, cache, self.alpha), {}


class MaxPool(Layer):
    kind = 'maxpool'

    def __init__(self, name: str, size: tuple):
        super().__init__(name)
        self.size = tuple(size)

    def output_shape(self, input_shape):
        extents = maxpool_output_extents(input_shape[1:-1], self.size, self.size)
        return (input_shape[0],) + extents + (input_shape[-1],)

    def forward(self, x, mode, rng=None):
        return maxpool_forward(x, self.size)

    def backward(self, grad, cache):
        return maxpool_backward(grad, cache), {}


class Dropout(Layer):
    kind = 'dropout'

    def __init__(self, name: str, rate: float):
        super().__init__(name, LayerState.dropout(rate))

    @property
    def rate(self) -> float:
        return self.state.rate

    def forward(self, x, mode, rng=None):
        return dropout(x, self.rate, mode, rng)

    def backward(self, grad, cache):
        return dropout_backward(grad, cache, self.rate), {}


class SqueezeTime(Layer):
    """Drop the collapsed temporal axis: ``B×H×W×1×C → B×H×W×C``."""

    kind = 'reshape'

    def output_shape(self, input_shape):
        if len(input_shape) != 5 or input_shape[3] != 1:
            raise KernelError(f"{self.name}: temporal axis must be collapsed to 1, got shape {tuple(input_shape)}")
        return tuple(input_shape[:3]) + (input_shape[4],)

    def forward(self, x, mode, rng=None):
        return reshape(x, self.output_shape(x.shape)), x.shape

    def backward(self, grad, cache):
        return reshape(grad, cache), {}


class GlobalAveragePool(Layer):
    kind = 'avgpool'

    def output_shape(self, input_shape):
        return (input_shape[0], input_shape[-1])

    def forward(self, x, mode, rng=None):
        return global_avgpool2d(x), x.shape

    def backward(self, grad, cache):
        return global_avgpool2d_backward(grad, cache), {}


class Softmax(Layer):
    """Softmax head. Backward expects the gradient with respect to the logits and passes it through."""

    kind = 'softmax'

    def forward(self, x, mode, rng=None):
        return softmax(x), None

    def backward(self, grad, cache):
        return grad, {}


def glorot_uniform(shape: tuple, rng: np.random.Generator, dtype) -> np.ndarray:
    """Uniform in ``±sqrt(6 / (fan_in + fan_out))`` for ``kernel × Cin × Cout`` weights."""
    receptive = int(np.prod(shape[:-2]))
    fan_in, fan_out = receptive * shape[-2], receptive * shape[-1]
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape).astype(dtype)
