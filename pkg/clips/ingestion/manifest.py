"""Generic datasets described by a manifest CSV ``path,label[,subject,camera]``."""
import logging
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from ..exceptions import ManifestError
from .base_scanner import BaseScanner

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.csv'
REQUIRED = ('path', 'label')


class ManifestScanner(BaseScanner):
    """Reads ``manifest.csv`` in the dataset root (or the root itself when it is a CSV file).

    Relative paths resolve against the manifest's directory. The optional
    ``subject`` column becomes the performer id.
    """

    @property
    def manifest_path(self) -> Path:
        return self.root if self.root.is_file() else self.root / MANIFEST_NAME

    def entries(self) -> List[Dict[str, Any]]:
        path = self.manifest_path
        if not path.exists():
            logger.info(f"No manifest at {path}; treating the dataset as empty")
            return []
        table = pd.read_csv(path, dtype={'path': str})
        missing = [column for column in REQUIRED if column not in table.columns]
        if missing:
            raise ManifestError(f"{path} lacks required columns {missing}")
        return table.to_dict('records')

    def process_entry(self, entry: Dict[str, Any]) -> Dict[str, Any]:
        video = Path(str(entry['path']))
        if not video.is_absolute():
            video = self.manifest_path.parent / video
        if pd.isna(entry['label']):
            raise ValueError(f"{video} has no label")
        label = int(entry['label'])
        if label < 0:
            raise ValueError(f"{video} has negative label {label}")
        n_frames = self.frame_count(video)
        if n_frames == 0:
            raise ValueError(f"{video} holds no frames")

        def optional(column):
            value = entry.get(column)
            return None if value is None or pd.isna(value) else int(value)

        return {
            'name': video.stem if video.suffix == '.npy' else video.name,
            'path': str(video),
            'dataset': self.dataset_name,
            'label': label,
            'setup': None,
            'camera': optional('camera'),
            'performer': optional('subject'),
            'replication': None,
            'action': label + 1,
            'n_frames': n_frames,
        }
