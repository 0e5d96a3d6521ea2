"""
Reading depth videos and turning them into network-ready clips.

A video on disk is either a directory of 16-bit frame images (sorted by file
name) or a ``.npy`` stack of shape ``L × H × W``. A ``.npy`` of shape
``64 × 64 × 30`` (optionally ``× 1``) holding floats is treated as an already
prepared clip.
"""
import logging
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np

from .exceptions import EmptyVideoError, MalformedFrameError
from .frames import INPUT_SIZE, MAX_DEPTH_MM, crop_resize, decode_frame, normalize
from .roi import compute_roi
from .sampling import CLIP_LENGTH, select_frames

logger = logging.getLogger(__name__)

FRAME_SUFFIXES = ('.png', '.tif', '.tiff', '.pgm')
CLIP_SHAPE = (INPUT_SIZE, INPUT_SIZE, CLIP_LENGTH, 1)


def list_frames(video_dir: Union[str, Path]) -> list:
    video_dir = Path(video_dir)
    return sorted(p for p in video_dir.iterdir() if p.suffix.lower() in FRAME_SUFFIXES)


def prepare_clip(frames: np.ndarray, max_depth_mm: float = MAX_DEPTH_MM) -> np.ndarray:
    """Crop 30 selected depth frames to their shared ROI, resize and normalize to ``64×64×30×1``."""
    roi = compute_roi(frames)
    resized = [normalize(crop_resize(frame, roi), max_depth_mm) for frame in frames]
    return np.stack(resized, axis=-1)[..., None].astype(np.float32)


class DiskVideoSource:
    """Frames read lazily from the ``path`` column of a sample index."""

    def length(self, entry) -> int:
        path = Path(entry['path'])
        if path.suffix == '.npy':
            return int(np.load(path, mmap_mode='r').shape[0])
        count = len(list_frames(path))
        if count == 0:
            raise EmptyVideoError(f"no frame images in {path}")
        return count

    def frames(self, entry, indices: Sequence[int]) -> np.ndarray:
        path = Path(entry['path'])
        if path.suffix == '.npy':
            stack = np.load(path, mmap_mode='r')
            return np.asarray(stack[np.asarray(indices)], dtype=np.uint16)

        files = list_frames(path)
        if not files:
            raise EmptyVideoError(f"no frame images in {path}")
        decoded: Dict[int, np.ndarray] = {}
        for index in sorted(set(int(i) for i in indices)):
            decoded[index] = decode_frame(files[index])
        shapes = {frame.shape for frame in decoded.values()}
        if len(shapes) != 1:
            raise MalformedFrameError(f"{path}: frames have differing sizes {sorted(shapes)}")
        return np.stack([decoded[int(i)] for i in indices])


class ArrayVideoSource:
    """Videos held in memory as ``L × H × W`` uint16 arrays keyed by sample name."""

    def __init__(self, videos: Dict[str, np.ndarray]):
        self.videos = videos

    def length(self, entry) -> int:
        return int(self.videos[entry['name']].shape[0])

    def frames(self, entry, indices: Sequence[int]) -> np.ndarray:
        return self.videos[entry['name']][np.asarray(indices)]


def load_clip_file(path: Union[str, Path], max_depth_mm: float = MAX_DEPTH_MM) -> np.ndarray:
    """A single clip for prediction, from a prepared tensor, a raw ``.npy`` stack or a frame directory.

    Raw videos are sampled in eval mode (midpoint start).
    """
    path = Path(path)
    if path.suffix == '.npy':
        try:
            array = np.load(path)
        except (OSError, ValueError) as exc:
            raise MalformedFrameError(f"cannot read clip {path}: {exc}") from exc
        if array.shape in (CLIP_SHAPE, CLIP_SHAPE[:-1]) and np.issubdtype(array.dtype, np.floating):
            if array.size and (array.min() < 0 or array.max() > 1):
                raise MalformedFrameError(f"prepared clip {path} has values outside [0, 1]")
            return array.reshape(CLIP_SHAPE).astype(np.float32)
        if array.ndim != 3:
            raise MalformedFrameError(f"{path}: expected L×H×W depth frames or a 64×64×30 clip, got {array.shape}")
        indices = select_frames(array.shape[0], mode='eval')
        return prepare_clip(array[indices].astype(np.uint16), max_depth_mm)

    if not path.is_dir():
        raise MalformedFrameError(f"clip path {path} is neither a .npy file nor a frame directory")
    source = DiskVideoSource()
    entry = {'path': str(path)}
    indices = select_frames(source.length(entry), mode='eval')
    return prepare_clip(source.frames(entry, indices), max_depth_mm)
