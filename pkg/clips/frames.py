"""
Single depth frame I/O and per-frame transforms.

Frames are 16-bit single-channel images holding millimetres, with 0 marking
masked background. Pillow opens them as mode ``I;16`` (or ``I`` for some PNG
encoders); anything else is rejected.
"""
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import BitDepthError, MalformedFrameError

logger = logging.getLogger(__name__)

SIXTEEN_BIT_MODES = ('I;16', 'I;16L', 'I;16B')
MAX_DEPTH_MM = 4500.0
INPUT_SIZE = 64


@dataclass(frozen=True)
class RoiBox:
    """Half-open pixel box ``[top, bottom) × [left, right)``."""

    top: int
    left: int
    bottom: int
    right: int

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def width(self) -> int:
        return self.right - self.left


def decode_frame(source: Union[bytes, str, Path]) -> np.ndarray:
    """Decode a 16-bit depth frame into a ``height × width`` uint16 array."""
    try:
        if isinstance(source, (bytes, bytearray)):
            image = Image.open(io.BytesIO(source))
        else:
            image = Image.open(source)
        image.load()
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise MalformedFrameError(f"cannot decode depth frame: {exc}") from exc

    if image.mode in SIXTEEN_BIT_MODES:
        return np.asarray(image, dtype=np.uint16).copy()
    if image.mode == 'I':
        pixels = np.asarray(image)
        if pixels.size and (pixels.min() < 0 or pixels.max() >= 2 ** 16):
            raise BitDepthError("32-bit frame holds values outside the 16-bit range")
        return pixels.astype(np.uint16)
    raise BitDepthError(f"expected a 16-bit single-channel frame, got Pillow mode {image.mode!r}")


def encode_frame(depth: np.ndarray, path: Union[str, Path]):
    """Write a uint16 depth array as a 16-bit grayscale PNG."""
    depth = np.asarray(depth)
    if depth.ndim != 2:
        raise BitDepthError(f"a depth frame is 2-D, got shape {depth.shape}")
    Image.fromarray(depth.astype(np.uint16)).save(path, format='PNG')


def crop_resize(frame: np.ndarray, roi: RoiBox, size: int = INPUT_SIZE) -> np.ndarray:
    """Nearest-neighbour resample of ``roi`` to ``size × size``; output values are a subset of the input's."""
    if roi.height < 1 or roi.width < 1:
        raise ValueError(f"empty region of interest {roi}")
    image = Image.fromarray(np.ascontiguousarray(frame, dtype=np.uint16))
    resized = image.resize((size, size), resample=Image.Resampling.NEAREST,
                           box=(roi.left, roi.top, roi.right, roi.bottom))
    return np.asarray(resized, dtype=np.uint16)


def normalize(depth: np.ndarray, max_depth_mm: float = MAX_DEPTH_MM) -> np.ndarray:
    """``min(depth, max_depth_mm) / max_depth_mm`` as float32; the mask value 0 stays 0."""
    depth = np.asarray(depth, dtype=np.float32)
    return np.minimum(depth, np.float32(max_depth_mm)) / np.float32(max_depth_mm)
