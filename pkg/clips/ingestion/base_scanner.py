import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..dataset import INDEX_COLUMNS
from ..exceptions import DatasetRootError
from ..videos import list_frames

logger = logging.getLogger(__name__)


@dataclass
class ScanResult:
    """Sample index (one row per video, sorted by path) plus every entry that could not be used."""

    index: pd.DataFrame
    rejects: List[Dict[str, str]] = field(default_factory=list)

    @property
    def warning_count(self) -> int:
        return len(self.rejects)


class BaseScanner(ABC):
    """Base class for all dataset scanners."""

    def __init__(self, root, dataset_name: Optional[str] = None):
        self.root = Path(root)
        self.dataset_name = dataset_name or self.root.name

    def check_root(self):
        if not self.root.exists():
            raise DatasetRootError(f"dataset root does not exist: {self.root}")

    @abstractmethod
    def entries(self) -> List[Any]:
        """Return the raw entries (paths, manifest rows, ...) to turn into samples."""
        pass

    @abstractmethod
    def process_entry(self, entry: Any) -> Dict[str, Any]:
        """Turn one entry into an index row; raise ValueError to reject it."""
        pass

    def frame_count(self, path: Path) -> int:
        if path.suffix == '.npy':
            return int(np.load(path, mmap_mode='r').shape[0])
        return len(list_frames(path))

    def scan(self) -> ScanResult:
        self.check_root()
        rows, rejects = [], []
        for entry in self.entries():
            try:
                rows.append(self.process_entry(entry))
            except (ValueError, OSError) as e:
                logger.warning(f"Rejected {entry}: {e}")
                rejects.append({'entry': str(entry), 'reason': str(e)})
                continue

        index = pd.DataFrame(rows, columns=INDEX_COLUMNS)
        if not index.empty:
            index = index.sort_values('path', kind='stable').reset_index(drop=True)
        logger.info(f"Scanned {self.root}: {len(index)} samples, {len(rejects)} rejects")
        return ScanResult(index=index, rejects=rejects)
