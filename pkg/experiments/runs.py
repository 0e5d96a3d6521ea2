"""Dataset wiring shared by the training and evaluation commands."""
import logging
from typing import Optional, Tuple

from clips.dataset import ClipDataset
from clips.ingestion.service import scan_dataset
from fcnn.training import TrainingResult, fit

from .config import RunConfig
from .exceptions import ConfigError, EmptyTrainingSetError
from .splits import Split, apply_split, load_protocol

logger = logging.getLogger(__name__)


def load_split(config: RunConfig) -> Split:
    """Scan ``config.dataset_root`` and split it by ``config.protocol`` (everything trains when there is none)."""
    if config.dataset_root is None:
        raise ConfigError("no dataset root given (--root or dataset_root=...)")
    result = scan_dataset(config.dataset_root, config.naming, config.dataset)
    if result.rejects:
        logger.warning(f"{len(result.rejects)} entries under {config.dataset_root} were rejected")
    index = result.index

    if not index.empty and int(index['label'].max()) >= config.n_classes:
        raise ConfigError(
            f"dataset has label {int(index['label'].max())} but the run is configured for {config.n_classes} classes"
        )
    if config.protocol is None:
        return Split(train=index, test=index.iloc[0:0])
    return apply_split(index, load_protocol(config.protocol))


def clip_dataset(index, config: RunConfig) -> ClipDataset:
    return ClipDataset(index, padding_mode=config.padding_mode, max_depth_mm=config.max_depth_mm,
                       workers=config.workers)


def load_datasets(config: RunConfig) -> Tuple[ClipDataset, Optional[ClipDataset]]:
    """Train and test datasets of the configured split; the test side is None when empty."""
    split = load_split(config)
    train = clip_dataset(split.train, config)
    test = clip_dataset(split.test, config) if len(split.test) else None
    return train, test


def train_model(model, config: RunConfig, show_progress: bool = False) -> TrainingResult:
    """Fit ``model`` on the train side of the configured split, validating on the test side."""
    train, test = load_datasets(config)
    if len(train) == 0:
        raise EmptyTrainingSetError(f"no training samples under {config.dataset_root}")
    return fit(model, train, test, config.train_config(show_progress))
