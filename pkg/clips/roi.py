"""Per-clip region of interest around the masked foreground."""
import logging
from typing import Sequence, Union

import numpy as np

from .exceptions import EmptyForegroundError
from .frames import RoiBox

logger = logging.getLogger(__name__)

MARGIN_DIVISOR = 20  # 5% per side


def _grow(low: int, high: int, size: int, limit: int) -> tuple:
    """Widen ``[low, high)`` to ``size`` around its centre, shift it inside ``[0, limit)``, then clamp."""
    extra = size - (high - low)
    low -= extra // 2
    high = low + size
    if low < 0:
        high -= low
        low = 0
    if high > limit:
        low -= high - limit
        high = limit
    return max(low, 0), high


def compute_roi(frames: Union[np.ndarray, Sequence[np.ndarray]]) -> RoiBox:
    """One square box holding the foreground of every frame of the clip.

    The union bounding box of nonzero pixels gets a ``ceil(5%)`` margin per side
    and is grown to a square; only the frame border can make it non-square.
    """
    stack = np.asarray(frames)
    if stack.ndim == 2:
        stack = stack[None]
    height, width = stack.shape[1:]

    support = np.any(stack != 0, axis=0)
    if not support.any():
        raise EmptyForegroundError("empty foreground")
    rows = np.flatnonzero(support.any(axis=1))
    cols = np.flatnonzero(support.any(axis=0))
    top, bottom = int(rows[0]), int(rows[-1]) + 1
    left, right = int(cols[0]), int(cols[-1]) + 1

    margin_y = -(-(bottom - top) // MARGIN_DIVISOR)
    margin_x = -(-(right - left) // MARGIN_DIVISOR)
    top, bottom = top - margin_y, bottom + margin_y
    left, right = left - margin_x, right + margin_x

    side = max(bottom - top, right - left)
    top, bottom = _grow(top, bottom, side, height)
    left, right = _grow(left, right, side, width)
    return RoiBox(top=top, left=left, bottom=bottom, right=right)
