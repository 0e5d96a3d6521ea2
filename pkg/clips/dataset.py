"""
Clip datasets and seeded batch assembly.

A dataset wraps a sample index (one row per video, see ``INDEX_COLUMNS``) and a
video source. Batches are planned in the calling thread: the sample order and
one child seed per sample are drawn from the caller's generator before any
loading starts, so worker threads can decode clips in parallel without
changing the result.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np
import pandas as pd

from .frames import MAX_DEPTH_MM
from .prefetch import BatchPrefetcher
from .sampling import SAMPLING_MODES, select_frames
from .videos import CLIP_SHAPE, DiskVideoSource, prepare_clip

logger = logging.getLogger(__name__)

INDEX_COLUMNS = ['name', 'path', 'dataset', 'label', 'setup', 'camera', 'performer', 'replication', 'action', 'n_frames']
META_COLUMNS = ['dataset', 'setup', 'camera', 'performer', 'replication', 'action', 'path']


@dataclass
class ClipSample:
    frames: np.ndarray
    label: int
    meta: dict = field(default_factory=dict)


@dataclass
class Batch:
    clips: np.ndarray
    labels: np.ndarray
    names: List[str]
    short: bool = False

    def __len__(self):
        return len(self.labels)


def empty_index() -> pd.DataFrame:
    return pd.DataFrame(columns=INDEX_COLUMNS)


class ClipDataset:
    def __init__(self, index: pd.DataFrame, source=None, padding_mode: str = 'reflect',
                 max_depth_mm: float = MAX_DEPTH_MM, workers: int = 4):
        missing = {'name', 'label'} - set(index.columns)
        if missing:
            raise ValueError(f"sample index lacks columns {sorted(missing)}")
        self.index = index.reset_index(drop=True)
        self.source = source or DiskVideoSource()
        self.padding_mode = padding_mode
        self.max_depth_mm = max_depth_mm
        self.workers = max(1, workers)

    def __len__(self):
        return len(self.index)

    @property
    def labels(self) -> np.ndarray:
        return self.index['label'].to_numpy(dtype=np.int64)

    def subset(self, mask) -> "ClipDataset":
        return ClipDataset(self.index[mask], self.source, self.padding_mode, self.max_depth_mm, self.workers)

    def _length(self, entry) -> int:
        known = entry.get('n_frames') if hasattr(entry, 'get') else None
        if known is not None and not pd.isna(known):
            return int(known)
        return self.source.length(entry)

    def load(self, position: int, mode: str = 'eval', rng: Optional[np.random.Generator] = None) -> ClipSample:
        entry = self.index.iloc[position]
        indices = select_frames(self._length(entry), rng, mode, self.padding_mode)
        frames = prepare_clip(self.source.frames(entry, indices), self.max_depth_mm)
        meta = {key: entry[key] for key in META_COLUMNS if key in entry}
        return ClipSample(frames=frames, label=int(entry['label']), meta=meta)

    def make_batch(self, positions, mode: str = 'eval', rng: Optional[np.random.Generator] = None,
                   batch_size: Optional[int] = None) -> Batch:
        """Load ``positions`` into one batch; train mode draws one child seed per sample from ``rng``."""
        positions = [int(p) for p in positions]
        if mode == 'train':
            if rng is None:
                raise ValueError("train-mode batches need a random generator")
            seeds = rng.integers(0, 2 ** 63 - 1, size=len(positions))
            generators = [np.random.default_rng(int(seed)) for seed in seeds]
        else:
            generators = [None] * len(positions)

        if self.workers > 1 and len(positions) > 1:
            with ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix='clip-loader') as executor:
                samples = list(executor.map(lambda job: self.load(job[0], mode, job[1]), zip(positions, generators)))
        else:
            samples = [self.load(p, mode, g) for p, g in zip(positions, generators)]

        clips = np.stack([sample.frames for sample in samples]) if samples else np.zeros((0,) + CLIP_SHAPE, np.float32)
        return Batch(
            clips=clips,
            labels=np.array([sample.label for sample in samples], dtype=np.int64),
            names=[str(self.index.iloc[p]['name']) for p in positions],
            short=batch_size is not None and len(positions) < batch_size,
        )

    def plan(self, batch_size: int, mode: str, rng: Optional[np.random.Generator] = None) -> List[np.ndarray]:
        """Sample positions per batch; train mode shuffles with ``rng``."""
        if batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        if mode not in SAMPLING_MODES:
            raise ValueError(f"mode must be one of {SAMPLING_MODES}, got {mode!r}")
        if mode == 'train':
            if rng is None:
                raise ValueError("train-mode batches need a random generator")
            order = rng.permutation(len(self))
        else:
            order = np.arange(len(self))
        return [order[i:i + batch_size] for i in range(0, len(order), batch_size)]

    def _generate(self, batch_size: int, mode: str, rng) -> Iterator[Batch]:
        for positions in self.plan(batch_size, mode, rng):
            yield self.make_batch(positions, mode, rng, batch_size)

    def iter_batches(self, batch_size: int = 12, mode: str = 'eval', rng: Optional[np.random.Generator] = None,
                     prefetch: int = 0) -> Iterator[Batch]:
        """Every sample once, in ``ceil(len / batch_size)`` batches; the last may be short (``batch.short``)."""
        batches = self._generate(batch_size, mode, rng)
        if prefetch < 1:
            yield from batches
            return
        prefetcher = BatchPrefetcher(batches, capacity=prefetch)
        try:
            yield from prefetcher
        finally:
            prefetcher.close()

    def batch_count(self, batch_size: int) -> int:
        return math.ceil(len(self) / batch_size)
