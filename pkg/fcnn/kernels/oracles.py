"""
Direct nested-loop references for the vectorised kernels.

Slow by construction; only the kernel tests call them.
"""
import itertools

import numpy as np

from .conv import ConvSpec
from .pooling import maxpool_output_extents


def conv_oracle(x, weights, bias, strides, padding):
    """Direct convolution: every output cell is an explicit windowed dot product."""
    spec = ConvSpec(weights.shape[:-2], strides, padding, weights.shape[-2], weights.shape[-1])
    pads = spec.pads(x.shape[1:-1])
    xpad = np.pad(x, [(0, 0)] + pads + [(0, 0)])
    out_shape = spec.output_shape(x.shape)
    out = np.zeros(out_shape, dtype=np.float64)

    for b in range(out_shape[0]):
        for position in np.ndindex(*out_shape[1:-1]):
            for co in range(spec.out_channels):
                total = float(bias[co])
                for offset in np.ndindex(*spec.kernel):
                    source = tuple(p * s + o for p, s, o in zip(position, spec.strides, offset))
                    for ci in range(spec.in_channels):
                        total += float(xpad[(b,) + source + (ci,)]) * float(weights[offset + (ci, co)])
                out[(b,) + position + (co,)] = total
    return out


def conv3d_oracle(x, weights, bias, strides=(1, 1, 1), padding='same'):
    return conv_oracle(x, weights, bias, strides, padding)


def conv2d_oracle(x, weights, bias, strides=(1, 1), padding='same'):
    return conv_oracle(x, weights, bias, strides, padding)


def maxpool_oracle(x, size=(3, 3, 3), strides=None, ceil_mode=True):
    """Window-scan max pooling; returns maxima and the flat in-window index of each winner."""
    strides = size if strides is None else strides
    in_extents = x.shape[1:-1]
    out_extents = maxpool_output_extents(in_extents, size, strides, ceil_mode)
    out = np.zeros((x.shape[0],) + out_extents + (x.shape[-1],), dtype=x.dtype)
    winners = np.zeros(out.shape, dtype=np.int32)

    for b, c in itertools.product(range(x.shape[0]), range(x.shape[-1])):
        for position in np.ndindex(*out_extents):
            best, best_at = None, 0
            for flat, offset in enumerate(np.ndindex(*size)):
                source = tuple(p * s + o for p, s, o in zip(position, strides, offset))
                if any(i >= n for i, n in zip(source, in_extents)):
                    continue
                value = x[(b,) + source + (c,)]
                if best is None or value > best:
                    best, best_at = value, flat
            out[(b,) + position + (c,)] = best
            winners[(b,) + position + (c,)] = best_at
    return out, winners
