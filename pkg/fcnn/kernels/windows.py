"""Extent arithmetic and strided window views shared by convolution and pooling."""
import math
from typing import Sequence

from ..exceptions import KernelError

PADDINGS = ('same', 'valid')


def same_padding(extent: int, kernel: int, stride: int) -> tuple:
    """Zero padding ``(before, after)`` that makes the output extent ``ceil(extent / stride)``."""
    out = math.ceil(extent / stride)
    total = max((out - 1) * stride + kernel - extent, 0)
    return total // 2, total - total // 2


def valid_extent(extent: int, kernel: int, stride: int) -> int:
    if kernel > extent:
        raise KernelError(f"kernel extent {kernel} exceeds padded input extent {extent}")
    return (extent - kernel) // stride + 1


def pooled_extent(extent: int, window: int, stride: int, ceil_mode: bool = True) -> int:
    """Output extent of a pooling axis; a ceil-mode window must still start inside the input."""
    if not ceil_mode:
        return valid_extent(extent, window, stride)
    out = math.ceil((extent - window) / stride) + 1
    if (out - 1) * stride >= extent:
        out -= 1
    return max(out, 1)


def window_slice(offset: Sequence[int], out_extents: Sequence[int], strides: Sequence[int]) -> tuple:
    """Index selecting, for every output position, the input cell at kernel ``offset``.

    The returned tuple spans the full ``B × spatial × C`` tensor, so the view has
    the output's spatial shape with batch and channel axes untouched.
    """
    spatial = tuple(
        slice(o, o + s * (n - 1) + 1, s)
        for o, n, s in zip(offset, out_extents, strides)
    )
    return (slice(None),) + spatial + (slice(None),)


def crop(x, pads: Sequence[tuple]):
    """Drop the padding added on every spatial axis of a ``B × spatial × C`` tensor."""
    index = [slice(None)]
    for before, after in pads:
        index.append(slice(before, x.shape[len(index)] - after))
    index.append(slice(None))
    return x[tuple(index)]
