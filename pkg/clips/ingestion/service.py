import logging
from pathlib import Path

import pandas as pd

from .base_scanner import ScanResult
from .manifest import ManifestScanner
from .ntu import NtuScanner

logger = logging.getLogger(__name__)

SCANNERS = {
    'ntu': NtuScanner,
    'generic': ManifestScanner,
}


def scan_dataset(root, naming: str = 'ntu', dataset_name: str = None) -> ScanResult:
    """Discover every clip under ``root`` using the scanner for ``naming``."""
    try:
        scanner_class = SCANNERS[naming]
    except KeyError:
        raise ValueError(f"naming must be one of {sorted(SCANNERS)}, got {naming!r}") from None
    return scanner_class(root, dataset_name).scan()


class DatasetReportService:
    """Service to scan a dataset root and write its report files."""

    def __init__(self, root, naming: str = 'ntu', dataset_name: str = None):
        self.root = Path(root)
        self.naming = naming
        self.dataset_name = dataset_name

    def run(self, out_dir) -> dict:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        result = scan_dataset(self.root, self.naming, self.dataset_name)
        index = result.index

        index.to_csv(out_dir / 'index.csv', index=False)
        self._counts(index, 'label').to_csv(out_dir / 'per_class_counts.csv', index=False)
        self._counts(index, 'performer').to_csv(out_dir / 'per_subject_counts.csv', index=False)
        self._counts(index, 'camera').to_csv(out_dir / 'per_camera_counts.csv', index=False)
        self.length_histogram(index).to_csv(out_dir / 'length_histogram.csv', index=False)

        with open(out_dir / 'rejects.txt', 'w', encoding='utf-8') as fh:
            for reject in result.rejects:
                fh.write(f"{reject['entry']}\t{reject['reason']}\n")

        lengths = index['n_frames'].astype(float) if not index.empty else pd.Series(dtype=float)
        report = {
            'samples': len(index),
            'classes': int(index['label'].nunique()) if not index.empty else 0,
            'rejects': result.warning_count,
            'min_length': int(lengths.min()) if not lengths.empty else 0,
            'max_length': int(lengths.max()) if not lengths.empty else 0,
        }
        logger.info(f"Dataset report for {self.root}: {report}")
        return report

    @staticmethod
    def _counts(index: pd.DataFrame, column: str) -> pd.DataFrame:
        if index.empty or index[column].isna().all():
            return pd.DataFrame(columns=[column, 'count'])
        counts = index[column].dropna().astype(int).value_counts().sort_index()
        return counts.rename_axis(column).reset_index(name='count')

    @staticmethod
    def length_histogram(index: pd.DataFrame, bin_width: int = 10) -> pd.DataFrame:
        """Video lengths in ``bin_width``-frame bins: ``bin_start,bin_end,count``."""
        if index.empty:
            return pd.DataFrame(columns=['bin_start', 'bin_end', 'count'])
        lengths = index['n_frames'].astype(int)
        starts = (lengths // bin_width) * bin_width
        counts = starts.value_counts().sort_index()
        return pd.DataFrame({
            'bin_start': counts.index,
            'bin_end': counts.index + bin_width - 1,
            'count': counts.to_numpy(),
        })
