"""Choosing which 30 source frames make up a clip."""
from typing import Optional

import numpy as np

CLIP_LENGTH = 30
PADDING_MODES = ('reflect', 'repeat_last')
SAMPLING_MODES = ('train', 'eval')


def start_range(video_length: int) -> int:
    """Largest valid start index for videos that need no padding (0 for short ones)."""
    if video_length >= 2 * CLIP_LENGTH:
        return video_length - (2 * CLIP_LENGTH - 1)
    if video_length >= CLIP_LENGTH:
        return video_length - CLIP_LENGTH
    return 0


def _padded(video_length: int, padding_mode: str) -> np.ndarray:
    steps = np.arange(CLIP_LENGTH)
    if video_length == 1:
        return np.zeros(CLIP_LENGTH, dtype=np.int64)
    if padding_mode == 'repeat_last':
        return np.minimum(steps, video_length - 1)
    period = 2 * (video_length - 1)
    phase = steps % period
    return np.where(phase < video_length, phase, period - phase)


def select_frames(video_length: int, rng: Optional[np.random.Generator] = None,
                  mode: str = 'train', padding_mode: str = 'reflect') -> np.ndarray:
    """Thirty source frame indices for a video of ``video_length`` frames.

    * shorter than 30: every frame, then reflected back (``…, L−1, L−2, L−3, …``)
      or, with ``repeat_last``, the last frame repeated;
    * 30 to 59: 30 consecutive frames from a start in ``[0, L−30]``;
    * 60 and longer: every other frame from a start in ``[0, L−59]``.

    Train mode draws the start uniformly from ``rng``; eval mode pins it to the
    midpoint of the valid range.
    """
    if video_length < 1:
        raise ValueError(f"video length must be >= 1, got {video_length}")
    if mode not in SAMPLING_MODES:
        raise ValueError(f"mode must be one of {SAMPLING_MODES}, got {mode!r}")
    if padding_mode not in PADDING_MODES:
        raise ValueError(f"padding_mode must be one of {PADDING_MODES}, got {padding_mode!r}")

    if video_length < CLIP_LENGTH:
        return _padded(video_length, padding_mode).astype(np.int64)

    last_start = start_range(video_length)
    if mode == 'eval':
        start = last_start // 2
    else:
        if rng is None:
            raise ValueError("train-mode frame selection needs a random generator")
        start = int(rng.integers(0, last_start, endpoint=True))

    stride = 2 if video_length >= 2 * CLIP_LENGTH else 1
    return (start + stride * np.arange(CLIP_LENGTH)).astype(np.int64)
