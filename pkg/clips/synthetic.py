"""
Synthetic masked depth videos of a blob moving across an empty scene.

The class of a video is the blob's direction of motion (``n_classes``
directions evenly spaced around the circle), so every 30-frame clip of it is
separable by motion alone. Videos can stay in memory or be written as an
NTU-named frame tree.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from fcnn.seeding import substream

from .dataset import INDEX_COLUMNS, ClipDataset
from .frames import encode_frame
from .videos import ArrayVideoSource

logger = logging.getLogger(__name__)

FRAME_SIZE = (96, 96)
LENGTH_RANGE = (26, 90)


def moving_blob_video(label: int, n_classes: int, rng: np.random.Generator, length: int = None,
                      frame_size: Tuple[int, int] = FRAME_SIZE, radius: int = 7) -> np.ndarray:
    """``L × H × W`` uint16 depth video; background is 0, the blob sits at 1500-3500 mm."""
    height, width = frame_size
    length = int(length or rng.integers(LENGTH_RANGE[0], LENGTH_RANGE[1], endpoint=True))
    angle = 2 * math.pi * label / n_classes
    direction = np.array([-math.sin(angle), math.cos(angle)])  # (row, col); label 0 moves right

    travel = 0.5 * min(height, width)
    jitter = rng.uniform(-0.08, 0.08, size=2) * np.array([height, width])
    middle = np.array([height / 2, width / 2]) + jitter
    start = middle - direction * travel / 2
    base_depth = rng.uniform(1500, 3500)

    rows, cols = np.mgrid[0:height, 0:width]
    video = np.zeros((length, height, width), dtype=np.uint16)
    for t in range(length):
        cy, cx = start + direction * travel * t / max(length - 1, 1)
        disk = (rows - cy) ** 2 + (cols - cx) ** 2 <= radius ** 2
        depth = base_depth + 40.0 * (rows - cy) / radius + rng.normal(0, 5, size=(height, width))
        video[t][disk] = np.clip(depth[disk], 1, 2 ** 16 - 1).astype(np.uint16)
    return video


def synthetic_index(n_per_class: int, n_classes: int = 4, seed: int = 0, prefix: str = 'blob',
                    **video_kwargs) -> Tuple[pd.DataFrame, Dict[str, np.ndarray]]:
    """Sample index plus the in-memory videos it refers to."""
    rng = substream(seed, f"synthetic-{prefix}")
    rows, videos = [], {}
    for label in range(n_classes):
        for replication in range(1, n_per_class + 1):
            name = f"{prefix}-{label:02d}-{replication:03d}"
            video = moving_blob_video(label, n_classes, rng, **video_kwargs)
            videos[name] = video
            rows.append({
                'name': name, 'path': None, 'dataset': 'synthetic', 'label': label,
                'setup': 1, 'camera': 1 + replication % 3, 'performer': 1 + replication % 2,
                'replication': replication, 'action': label + 1, 'n_frames': video.shape[0],
            })
    return pd.DataFrame(rows, columns=INDEX_COLUMNS), videos


def synthetic_dataset(n_per_class: int, n_classes: int = 4, seed: int = 0, prefix: str = 'blob',
                      workers: int = 1, **video_kwargs) -> ClipDataset:
    index, videos = synthetic_index(n_per_class, n_classes, seed, prefix, **video_kwargs)
    return ClipDataset(index, ArrayVideoSource(videos), workers=workers)


def overfit_split(n_classes: int = 4, train_per_class: int = 10, val_per_class: int = 4, seed: int = 0):
    """Train/validation datasets for the moving-blob overfit check (40 and 16 clips by default)."""
    train = synthetic_dataset(train_per_class, n_classes, seed, prefix='train')
    val = synthetic_dataset(val_per_class, n_classes, seed, prefix='val')
    return train, val


def ntu_name(setup: int, camera: int, performer: int, replication: int, action: int) -> str:
    return f"S{setup:03d}C{camera:03d}P{performer:03d}R{replication:03d}A{action:03d}"


def write_ntu_tree(root, n_per_class: int = 2, n_classes: int = 4, seed: int = 0,
                   cameras: int = 3, performers: int = 4, show_progress: bool = False) -> pd.DataFrame:
    """Write moving-blob videos as NTU-named frame directories under ``root``.

    Cameras and performers cycle over the replications so cross-view and
    cross-subject splits of the tree are non-trivial. Returns the written index.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = substream(seed, 'synthetic-tree')
    rows = []
    jobs = [(label, k) for label in range(n_classes) for k in range(n_per_class)]
    for label, k in tqdm(jobs, desc='writing videos', disable=not show_progress):
        camera = 1 + k % cameras
        performer = 1 + (k // cameras) % performers
        replication = 1 + k // (cameras * performers)
        name = ntu_name(1, camera, performer, replication, label + 1)
        video = moving_blob_video(label, n_classes, rng)

        video_dir = root / name
        video_dir.mkdir(exist_ok=True)
        for t, frame in enumerate(video, start=1):
            encode_frame(frame, video_dir / f"MDepth-{t:08d}.png")
        rows.append({
            'name': name, 'path': str(video_dir), 'dataset': 'synthetic', 'label': label,
            'setup': 1, 'camera': camera, 'performer': performer, 'replication': replication,
            'action': label + 1, 'n_frames': video.shape[0],
        })
    logger.info(f"Wrote {len(rows)} synthetic videos under {root}")
    return pd.DataFrame(rows, columns=INDEX_COLUMNS)
