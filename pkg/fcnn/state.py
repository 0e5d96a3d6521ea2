"""
Per-layer learnable parameters, fixed hyperparameters and running statistics.
"""
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .exceptions import KernelError
from .tensor import Tensor, compute_dtype

PARAMETER_FIELDS = ('weights', 'bias', 'gamma', 'beta')
BUFFER_FIELDS = ('running_mean', 'running_var')


@dataclass
class LayerState:
    weights: Optional[Tensor] = None
    bias: Optional[Tensor] = None
    gamma: Optional[Tensor] = None
    beta: Optional[Tensor] = None
    running_mean: Optional[Tensor] = None
    running_var: Optional[Tensor] = None
    momentum: float = 0.99
    epsilon: float = 1e-5
    rate: float = 0.0
    trainable: bool = True

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise KernelError(f"dropout rate must be in [0, 1), got {self.rate}")
        if self.running_var is not None and np.any(self.running_var <= 0):
            raise KernelError("running variance must be strictly positive")

    @classmethod
    def convolution(cls, weight_shape, out_channels: int, dtype=None) -> "LayerState":
        dtype = dtype or compute_dtype()
        return cls(
            weights=np.zeros(weight_shape, dtype=dtype),
            bias=np.zeros(out_channels, dtype=dtype),
        )

    @classmethod
    def batchnorm(cls, channels: int, momentum: float = 0.99, epsilon: float = 1e-5, dtype=None) -> "LayerState":
        dtype = dtype or compute_dtype()
        return cls(
            gamma=np.ones(channels, dtype=dtype),
            beta=np.zeros(channels, dtype=dtype),
            running_mean=np.zeros(channels, dtype=dtype),
            running_var=np.ones(channels, dtype=dtype),
            momentum=momentum,
            epsilon=epsilon,
        )

    @classmethod
    def dropout(cls, rate: float) -> "LayerState":
        return cls(rate=rate)

    def parameters(self) -> Dict[str, Tensor]:
        """Learnable tensors in a fixed order (weights, bias, gamma, beta)."""
        return {name: getattr(self, name) for name in PARAMETER_FIELDS if getattr(self, name) is not None}

    def buffers(self) -> Dict[str, Tensor]:
        return {name: getattr(self, name) for name in BUFFER_FIELDS if getattr(self, name) is not None}

    def astype(self, dtype) -> "LayerState":
        """Copy with every tensor cast to ``dtype``."""
        tensors = {
            name: getattr(self, name).astype(dtype)
            for name in PARAMETER_FIELDS + BUFFER_FIELDS
            if getattr(self, name) is not None
        }
        return LayerState(
            momentum=self.momentum,
            epsilon=self.epsilon,
            rate=self.rate,
            trainable=self.trainable,
            **tensors,
        )
