"""NTU RGB+D style trees: one directory (or ``.npy`` stack) per video, named ``SsssCcccPpppRrrrAaaa``."""
import logging
import re
from pathlib import Path
from typing import Any, Dict, List

from ..videos import FRAME_SUFFIXES
from .base_scanner import BaseScanner

logger = logging.getLogger(__name__)

NTU_NAME = re.compile(r"S(\d{3})C(\d{3})P(\d{3})R(\d{3})A(\d{3})")


def parse_ntu_name(name: str) -> Dict[str, int]:
    """Setup, camera, performer, replication and action ids encoded in an NTU sample name."""
    match = NTU_NAME.fullmatch(name)
    if match is None:
        raise ValueError(f"not an NTU sample name: {name!r}")
    setup, camera, performer, replication, action = (int(group) for group in match.groups())
    if action < 1:
        raise ValueError(f"action ids start at 1, got {action} in {name!r}")
    return {
        'setup': setup,
        'camera': camera,
        'performer': performer,
        'replication': replication,
        'action': action,
    }


class NtuScanner(BaseScanner):
    def entries(self) -> List[Path]:
        found = []
        for path in sorted(self.root.iterdir()):
            if path.is_dir():
                found.append(path)
            elif path.suffix == '.npy':
                found.append(path)
            elif path.suffix.lower() not in FRAME_SUFFIXES:
                logger.debug(f"Skipping non-video file {path}")
        return found

    def process_entry(self, entry: Path) -> Dict[str, Any]:
        name = entry.stem if entry.suffix == '.npy' else entry.name
        meta = parse_ntu_name(name)
        n_frames = self.frame_count(entry)
        if n_frames == 0:
            raise ValueError(f"{entry} holds no frames")
        return {
            'name': name,
            'path': str(entry),
            'dataset': self.dataset_name,
            'label': meta['action'] - 1,
            'n_frames': n_frames,
            **meta,
        }
