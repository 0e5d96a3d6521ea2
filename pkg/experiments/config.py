"""
Run configuration.

A run is described by a flat ``key=value`` file (read with python-dotenv,
without touching the process environment). Values are layered
``settings.HAR_DEFAULTS`` < config file < command-line flags and validated
into a :class:`RunConfig`.
"""
import logging
from pathlib import Path
from typing import Literal, Optional, Tuple

from django.conf import settings
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from clips.sampling import PADDING_MODES
from fcnn.model import ModelSpec
from fcnn.optim import LrSchedule, default_schedule
from fcnn.training import TrainConfig

from .classes import DATASET_CLASSES
from .exceptions import ConfigError

logger = logging.getLogger(__name__)

NAMINGS = ('ntu', 'generic')


class RunConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dataset_root: Optional[Path] = None
    naming: Literal['ntu', 'generic'] = 'ntu'
    dataset: Optional[str] = None
    protocol: Optional[Path] = None
    checkpoint: Optional[Path] = None
    out_dir: Path = Path('runs')

    n_classes: Optional[int] = Field(default=None, ge=2)
    batch_size: int = Field(default=12, ge=1)
    epochs: int = Field(default=50, ge=1)
    seed: int = 0
    dropout_rate: float = Field(default=0.25, ge=0.0, lt=1.0)
    lr_boundaries: Optional[Tuple[int, int]] = None
    tail_epochs: int = Field(default=5, ge=0)
    step_size_epochs: int = Field(default=2, ge=1)

    padding_mode: str = 'reflect'
    workers: int = Field(default=4, ge=1)
    prefetch: int = Field(default=2, ge=0)
    max_depth_mm: float = Field(default=4500.0, gt=0)

    trainable_tail: int = Field(default=3, ge=1)
    swap_head: bool = False

    bench_warmup: int = Field(default=3, ge=0)
    bench_repetitions: int = Field(default=3, ge=0)
    bench_clips: int = Field(default=10, ge=1)

    @field_validator('lr_boundaries', mode='before')
    @classmethod
    def parse_boundaries(cls, value):
        if isinstance(value, str):
            parts = [part.strip() for part in value.split(',') if part.strip()]
            if not parts:
                return None
            if len(parts) != 2:
                raise ValueError("lr_boundaries takes two epochs: <end of phase 1>,<end of phase 2>")
            return tuple(int(part) for part in parts)
        return value

    @field_validator('padding_mode')
    @classmethod
    def check_padding(cls, value):
        if value not in PADDING_MODES:
            raise ValueError(f"padding_mode must be one of {PADDING_MODES}")
        return value

    @field_validator('dataset_root', 'protocol')
    @classmethod
    def check_exists(cls, value):
        if value is not None and not Path(value).exists():
            raise ValueError(f"path does not exist: {value}")
        return value

    @model_validator(mode='after')
    def fill_classes(self):
        if self.n_classes is None:
            self.n_classes = DATASET_CLASSES.get(self.dataset or 'ntu', 60)
        return self

    def schedule(self) -> LrSchedule:
        schedule = default_schedule(self.epochs, self.tail_epochs, self.lr_boundaries)
        return schedule.model_copy(update={'step_size_epochs': self.step_size_epochs})

    def model_spec(self) -> ModelSpec:
        return ModelSpec(n_classes=self.n_classes, dropout_rate=self.dropout_rate)

    def train_config(self, show_progress: bool = False) -> TrainConfig:
        return TrainConfig(
            n_classes=self.n_classes,
            batch_size=self.batch_size,
            epochs=self.epochs,
            seed=self.seed,
            schedule=self.schedule(),
            out_dir=self.out_dir,
            prefetch=self.prefetch,
            show_progress=show_progress,
        )


def read_config_file(path) -> dict:
    """Key/value pairs from a run config file; blank values are treated as unset."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path)
    return {key.strip().lower(): value for key, value in values.items() if value not in (None, '')}


def load_run_config(path=None, **overrides) -> RunConfig:
    """Merge settings defaults, the optional config file and non-None ``overrides``."""
    merged = {key: value for key, value in getattr(settings, 'HAR_DEFAULTS', {}).items() if value is not None}
    if path is not None:
        merged.update(read_config_file(path))
    merged.update({key: value for key, value in overrides.items() if value is not None})

    try:
        config = RunConfig(**merged)
    except ValidationError as exc:
        problems = '; '.join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}" for error in exc.errors()
        )
        raise ConfigError(f"invalid run configuration: {problems}") from exc
    logger.debug(f"Run configuration: {config.model_dump()}")
    return config
