"""
The 3D fully convolutional network for 64×64×30 depth clips.

Three 3D convolutional blocks extract spatio-temporal features; the last one
spans the whole remaining temporal extent so the temporal axis collapses to 1
and is squeezed away. Two 2D convolutions then map to one channel per class,
followed by global average pooling and a softmax.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .exceptions import FreezeError, MissingCacheError, ModelInputError, StaleCacheError
from .kernels import ConvSpec
from .layers import (
    BatchNorm,
    Convolution,
    Dropout,
    GlobalAveragePool,
    Layer,
    LeakyReLU,
    MaxPool,
    Softmax,
    SqueezeTime,
    glorot_uniform,
)
from .seeding import substream
from .state import LayerState
from .tensor import Tensor, compute_dtype

logger = logging.getLogger(__name__)

AXIS_NAMES = ('batch', 'height', 'width', 'time', 'channel')
MODES = ('train', 'infer')
HEAD = 'conv2d_2'


@dataclass(frozen=True)
class ModelSpec:
    """Hyperparameters that fully determine the layer list."""

    n_classes: int
    input_shape: Tuple[int, int, int] = (64, 64, 30)
    widths: Tuple[int, ...] = (32, 32, 64, 64, 128, 128)
    pool_size: int = 3
    alpha: float = 0.3
    dropout_rate: float = 0.25
    bn_momentum: float = 0.99
    bn_epsilon: float = 1e-5

    def __post_init__(self):
        object.__setattr__(self, 'input_shape', tuple(int(n) for n in self.input_shape))
        object.__setattr__(self, 'widths', tuple(int(w) for w in self.widths))
        if self.n_classes < 2:
            raise ModelInputError(f"n_classes must be >= 2, got {self.n_classes}")
        if len(self.input_shape) != 3:
            raise ModelInputError(f"input_shape is height × width × time, got {self.input_shape}")
        if len(self.widths) != 6:
            raise ModelInputError(f"widths lists the six hidden convolution widths, got {self.widths}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in known})


def gradcheck_spec(n_classes: int = 2) -> ModelSpec:
    """Shrunken clone used for whole-network finite-difference checks."""
    return ModelSpec(
        n_classes=n_classes,
        input_shape=(8, 8, 6),
        widths=(2, 2, 3, 3, 4, 4),
        pool_size=1,
    )


@dataclass
class ForwardCache:
    network_id: int
    version: int
    batch_size: int
    entries: List[object]
    consumed: bool = False


class Network:
    def __init__(self, spec: ModelSpec, layers: List[Layer]):
        self.spec = spec
        self.layers = layers
        self.trainable_tail: Optional[int] = None
        self.metadata: dict = {}
        self.version = 0
        self._by_name = {layer.name: layer for layer in layers}

    def __getitem__(self, name: str) -> Layer:
        return self._by_name[name]

    @property
    def n_classes(self) -> int:
        return self.spec.n_classes

    @property
    def dtype(self):
        return self['conv3d_1'].state.weights.dtype

    @property
    def convolutions(self) -> List[Convolution]:
        return [layer for layer in self.layers if isinstance(layer, Convolution)]

    def touch(self):
        """Mark parameters as changed; caches built before this are stale."""
        self.version += 1

    # parameters

    def parameters(self, trainable_only: bool = False) -> Dict[str, Tensor]:
        """Live parameter arrays keyed ``"<layer>.<field>"`` in layer order."""
        out = {}
        for layer in self.layers:
            if trainable_only and not layer.trainable:
                continue
            for field, value in layer.parameters().items():
                out[f"{layer.name}.{field}"] = value
        return out

    def buffers(self) -> Dict[str, Tensor]:
        out = {}
        for layer in self.layers:
            for field, value in layer.buffers().items():
                out[f"{layer.name}.{field}"] = value
        return out

    def parameter_count(self) -> int:
        return int(sum(value.size for value in self.parameters().values()))

    # forward / backward

    def _check_batch(self, batch) -> np.ndarray:
        batch = np.asarray(batch)
        expected = self.spec.input_shape + (1,)
        if batch.ndim != 5:
            raise ModelInputError(
                f"batch must have 5 axes ({' × '.join(AXIS_NAMES)}), got shape {batch.shape}"
            )
        for axis, (got, want) in enumerate(zip(batch.shape[1:], expected), start=1):
            if got != want:
                raise ModelInputError(
                    f"axis {axis} ({AXIS_NAMES[axis]}) has extent {got}, expected {want}"
                )
        return batch.astype(self.dtype, copy=False)

    def forward(self, batch, mode: str = 'infer', rng: Optional[np.random.Generator] = None):
        """Class probabilities ``[B, n_classes]`` and, in train mode, the backward cache."""
        if mode not in MODES:
            raise ModelInputError(f"mode must be one of {MODES}, got {mode!r}")
        x = self._check_batch(batch)

        entries = []
        for layer in self.layers:
            x, cache = layer.forward(x, mode, rng)
            if mode == 'train':
                entries.append(cache)

        if mode != 'train':
            return x, None
        return x, ForwardCache(id(self), self.version, x.shape[0], entries)

    def predict(self, batch) -> Tensor:
        probabilities, _ = self.forward(batch, 'infer')
        return probabilities

    def activations(self, batch) -> Iterator[Tuple[str, Tensor]]:
        """Yield ``(layer name, output)`` for every layer of an infer-mode pass."""
        x = self._check_batch(batch)
        yield 'input', x
        for layer in self.layers:
            x, _ = layer.forward(x, 'infer')
            yield layer.name, x

    def backward(self, cache: ForwardCache, grad_logits: Tensor) -> Dict[str, Tensor]:
        """Gradients of every trainable parameter from the gradient w.r.t. the logits."""
        if cache is None:
            raise MissingCacheError("backward needs the cache of a train-mode forward pass")
        if cache.consumed:
            raise StaleCacheError("forward cache was already used by a backward pass")
        if cache.network_id != id(self) or cache.version != self.version:
            raise StaleCacheError("parameters changed since the forward pass that built this cache")
        expected = (cache.batch_size, self.n_classes)
        if tuple(grad_logits.shape) != expected:
            raise ModelInputError(f"logit gradient has shape {grad_logits.shape}, expected {expected}")
        cache.consumed = True

        trainable = [i for i, layer in enumerate(self.layers) if layer.trainable]
        grads: Dict[str, Tensor] = {}
        if not trainable:
            return grads

        grad = np.asarray(grad_logits, dtype=self.dtype)
        for index in range(len(self.layers) - 1, trainable[0] - 1, -1):
            layer = self.layers[index]
            grad, layer_grads = layer.backward(grad, cache.entries[index])
            if layer.trainable:
                for field, value in layer_grads.items():
                    grads[f"{layer.name}.{field}"] = value
        return grads


def _conv(name, kernel, strides, padding, c_in, c_out, dtype) -> Convolution:
    spec = ConvSpec(kernel, strides, padding, c_in, c_out)
    return Convolution(name, spec, LayerState.convolution(spec.weight_shape, c_out, dtype))


def _bn(name, channels, spec: ModelSpec, dtype) -> BatchNorm:
    return BatchNorm(name, LayerState.batchnorm(channels, spec.bn_momentum, spec.bn_epsilon, dtype))


def assemble(spec: ModelSpec, dtype=None) -> Network:
    """Lay out the layer list with zeroed weights; shapes are propagated to size Conv3D 5."""
    dtype = dtype or compute_dtype()
    w = spec.widths
    head: List[Layer] = [
        _conv('conv3d_1', (3, 3, 3), (1, 1, 1), 'same', 1, w[0], dtype),
        _bn('bn_1', w[0], spec, dtype),
        LeakyReLU('lrelu_1', spec.alpha),
        _conv('conv3d_2', (3, 3, 3), (1, 1, 1), 'same', w[0], w[1], dtype),
        _bn('bn_2', w[1], spec, dtype),
        LeakyReLU('lrelu_2', spec.alpha),
        MaxPool('maxpool', (spec.pool_size,) * 3),
        Dropout('dropout_1', spec.dropout_rate),
        _conv('conv3d_3', (3, 3, 3), (1, 1, 1), 'valid', w[1], w[2], dtype),
        _bn('bn_3', w[2], spec, dtype),
        LeakyReLU('lrelu_3', spec.alpha),
        _conv('conv3d_4', (3, 3, 3), (1, 1, 1), 'valid', w[2], w[3], dtype),
        _bn('bn_4', w[3], spec, dtype),
        LeakyReLU('lrelu_4', spec.alpha),
        Dropout('dropout_2', spec.dropout_rate),
    ]

    shape = (1,) + spec.input_shape + (1,)
    try:
        for layer in head:
            shape = layer.output_shape(shape)
    except ValueError as exc:
        raise ModelInputError(f"input shape {spec.input_shape} is too small for this network: {exc}") from exc
    remaining_time = shape[3]

    tail: List[Layer] = [
        _conv('conv3d_5', (1, 1, remaining_time), (1, 1, 1), 'valid', w[3], w[4], dtype),
        SqueezeTime('reshape'),
        _conv('conv2d_1', (3, 3), (2, 2), 'valid', w[4], w[5], dtype),
        _bn('bn_5', w[5], spec, dtype),
        LeakyReLU('lrelu_5', spec.alpha),
        _conv(HEAD, (1, 1), (1, 1), 'valid', w[5], spec.n_classes, dtype),
        GlobalAveragePool('avgpool'),
        Softmax('softmax'),
    ]
    try:
        for layer in tail[:3]:
            shape = layer.output_shape(shape)
    except ValueError as exc:
        raise ModelInputError(f"input shape {spec.input_shape} is too small for this network: {exc}") from exc
    return Network(spec, head + tail)


def initialize(model: Network, rng: np.random.Generator, names=None):
    """Glorot-uniform weights and zero biases for the named convolutions (all when None)."""
    for layer in model.convolutions:
        if names is not None and layer.name not in names:
            continue
        layer.state.weights[...] = glorot_uniform(layer.spec.weight_shape, rng, layer.state.weights.dtype)
        layer.state.bias[...] = 0
    model.touch()


def build(n_classes: int, seed: int = 0, spec: Optional[ModelSpec] = None, dtype=None) -> Network:
    """Build and initialize the network; ``spec`` overrides the default hyperparameters."""
    if spec is None:
        spec = ModelSpec(n_classes=n_classes)
    elif spec.n_classes != n_classes:
        spec = dataclasses.replace(spec, n_classes=n_classes)
    model = assemble(spec, dtype)
    initialize(model, substream(seed, 'init'))
    logger.info(f"Built 3DFCNN with {model.parameter_count()} learnable parameters for {n_classes} classes")
    return model


def analytic_parameter_count(spec: ModelSpec) -> int:
    """Learnable parameter count from the closed-form per-layer formula."""
    model = assemble(spec)
    total = 0
    for layer in model.layers:
        if isinstance(layer, Convolution):
            k = int(np.prod(layer.spec.kernel))
            total += k * layer.spec.in_channels * layer.spec.out_channels + layer.spec.out_channels
        elif isinstance(layer, BatchNorm):
            total += 2 * layer.state.gamma.size
    return total


def freeze_for_finetune(model: Network, trainable_tail: int = 3) -> Network:
    """Leave only the last ``trainable_tail`` convolution blocks trainable.

    A batch normalization layer follows the trainable flag of the convolution
    it normalizes; frozen ones keep their running statistics fixed.
    """
    convolutions = model.convolutions
    if not 1 <= trainable_tail <= len(convolutions):
        raise FreezeError(f"trainable_tail must be in 1..{len(convolutions)}, got {trainable_tail}")

    first_trainable = len(convolutions) - trainable_tail
    owner_trainable = False
    for layer in model.layers:
        if isinstance(layer, Convolution):
            owner_trainable = convolutions.index(layer) >= first_trainable
            layer.state.trainable = owner_trainable
        elif isinstance(layer, BatchNorm):
            layer.state.trainable = owner_trainable
    model.trainable_tail = trainable_tail
    model.touch()
    logger.info(f"Frozen all but the last {trainable_tail} convolution blocks")
    return model


def swap_head(model: Network, n_classes: int, rng: np.random.Generator) -> Network:
    """Replace the final 1×1 convolution with a freshly initialized one for ``n_classes``."""
    old = model[HEAD]
    index = model.layers.index(old)
    head = _conv(HEAD, old.spec.kernel, old.spec.strides, old.spec.padding,
                 old.spec.in_channels, n_classes, old.state.weights.dtype)
    head.state.trainable = old.state.trainable
    model.layers[index] = head
    model._by_name[HEAD] = head
    model.spec = dataclasses.replace(model.spec, n_classes=n_classes)
    initialize(model, rng, names={HEAD})
    logger.info(f"Swapped classifier head to {n_classes} classes")
    return model
