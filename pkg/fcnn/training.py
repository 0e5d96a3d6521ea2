"""
Epoch/iteration training loop.

Datasets are consumed through ``iter_batches(batch_size, mode, rng=None,
prefetch=0)`` yielding objects with ``clips`` (``B×H×W×T×1``) and ``labels``;
``len(dataset)`` is the number of clips. The clip pipeline provides this.
"""
import logging
import math
from contextlib import closing
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from . import checkpoint
from .exceptions import NonFiniteGradientError, TrainingDivergedError
from .kernels import cross_entropy
from .model import Network
from .optim import AdamState, LrSchedule, adam_step, default_schedule
from .seeding import substream

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ['epoch', 'phase', 'lr', 'train_loss', 'train_acc', 'val_loss', 'val_acc']
TRACE_COLUMNS = ['epoch', 'iteration', 'lr', 'loss']


class TrainConfig(BaseModel):
    """Loop settings; dropout belongs to the network's ``ModelSpec``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, extra='forbid')

    n_classes: int = Field(ge=2)
    batch_size: int = Field(default=12, ge=1)
    epochs: int = Field(default=50, ge=1)
    seed: int = 0
    schedule: Optional[LrSchedule] = None
    out_dir: Optional[Path] = None
    prefetch: int = Field(default=2, ge=0)
    show_progress: bool = False

    @model_validator(mode='after')
    def fill_schedule(self):
        if self.schedule is None:
            self.schedule = default_schedule(self.epochs)
        if self.schedule.epochs != self.epochs:
            raise ValueError(f"schedule covers {self.schedule.epochs} epochs but training runs {self.epochs}")
        return self


@dataclass
class TrainingResult:
    history: pd.DataFrame
    lr_trace: pd.DataFrame
    last_checkpoint: Optional[Path]


def checkpoint_name(epoch: int) -> str:
    return f"checkpoint-epoch-{epoch:02d}.bin"


def measure(model: Network, dataset, batch_size: int, prefetch: int = 0):
    """Mean cross-entropy and accuracy of an infer-mode pass over ``dataset``."""
    total_loss, correct, seen = 0.0, 0, 0
    with closing(dataset.iter_batches(batch_size, 'eval', prefetch=prefetch)) as batches:
        for batch in batches:
            probabilities = model.predict(batch.clips)
            loss, _ = cross_entropy(probabilities, batch.labels)
            total_loss += loss * len(batch.labels)
            correct += int(np.sum(np.argmax(probabilities, axis=1) == batch.labels))
            seen += len(batch.labels)
    if seen == 0:
        return math.nan, math.nan
    return total_loss / seen, correct / seen


def _write_tables(out_dir: Optional[Path], history: list, trace: list):
    if out_dir is None:
        return
    pd.DataFrame(history, columns=HISTORY_COLUMNS).to_csv(out_dir / 'history.csv', index=False)
    pd.DataFrame(trace, columns=TRACE_COLUMNS).to_csv(out_dir / 'lr_trace.csv', index=False)


def fit(model: Network, train_set, val_set, config: TrainConfig, rng: Optional[np.random.Generator] = None) -> TrainingResult:
    """Train ``model`` in place and return the per-epoch history and per-iteration lr trace.

    ``rng`` drives dropout; it defaults to the ``dropout`` stream of
    ``config.seed``. Clip sampling always uses the ``sampler`` stream so the
    batches depend only on the seed. With ``config.out_dir`` set, a checkpoint
    plus ``history.csv`` and ``lr_trace.csv`` are written after every epoch.
    """
    if len(train_set) == 0:
        raise ValueError("training set is empty")
    dropout_rng = rng if rng is not None else substream(config.seed, 'dropout')
    sampler_rng = substream(config.seed, 'sampler')
    schedule = config.schedule
    iterations = math.ceil(len(train_set) / config.batch_size)
    adam = AdamState()
    out_dir = Path(config.out_dir) if config.out_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    history, trace = [], []
    last_checkpoint = None
    logger.info(
        f"Training {len(train_set)} clips for {config.epochs} epochs "
        f"({iterations} iterations/epoch, batch {config.batch_size}, seed {config.seed})"
    )

    for epoch in range(1, config.epochs + 1):
        phase = schedule.phase_at(epoch)
        epoch_lr = None
        total_loss, correct, seen = 0.0, 0, 0

        batches = train_set.iter_batches(config.batch_size, 'train', rng=sampler_rng, prefetch=config.prefetch)
        progress = tqdm(batches, total=iterations, desc=f"epoch {epoch}/{config.epochs}",
                        disable=not config.show_progress, leave=False)
        with closing(batches), progress:
            for iteration, batch in enumerate(progress):
                lr = schedule.lr_at(epoch, iteration, iterations)
                if epoch_lr is None:
                    epoch_lr = lr

                probabilities, cache = model.forward(batch.clips, 'train', dropout_rng)
                loss, grad_logits = cross_entropy(probabilities, batch.labels)
                if not math.isfinite(loss):
                    _write_tables(out_dir, history, trace)
                    raise TrainingDivergedError(
                        f"loss became {loss} at epoch {epoch}, iteration {iteration}", last_checkpoint
                    )
                grads = model.backward(cache, grad_logits)
                try:
                    adam_step(model.parameters(trainable_only=True), grads, adam, lr)
                except NonFiniteGradientError as exc:
                    _write_tables(out_dir, history, trace)
                    raise TrainingDivergedError(str(exc), last_checkpoint) from exc
                model.touch()

                count = len(batch.labels)
                total_loss += loss * count
                correct += int(np.sum(np.argmax(probabilities, axis=1) == batch.labels))
                seen += count
                trace.append((epoch, iteration, lr, loss))
                progress.set_postfix(loss=f"{total_loss / seen:.4f}", acc=f"{correct / seen:.3f}")

        val_loss, val_acc = (math.nan, math.nan) if val_set is None else measure(model, val_set, config.batch_size)
        row = (epoch, phase, epoch_lr, total_loss / seen, correct / seen, val_loss, val_acc)
        history.append(row)
        logger.info(
            f"epoch {epoch}: lr={epoch_lr:.3g} train_loss={row[3]:.4f} train_acc={row[4]:.4f} "
            f"val_loss={val_loss:.4f} val_acc={val_acc:.4f}"
        )

        if out_dir is not None:
            last_checkpoint = checkpoint.save(
                model,
                out_dir / checkpoint_name(epoch),
                metadata={
                    'epoch': epoch,
                    'seed': config.seed,
                    'phase': phase,
                    'adam_step': adam.t,
                    'iterations_per_epoch': iterations,
                },
            )
            _write_tables(out_dir, history, trace)

    return TrainingResult(
        history=pd.DataFrame(history, columns=HISTORY_COLUMNS),
        lr_trace=pd.DataFrame(trace, columns=TRACE_COLUMNS),
        last_checkpoint=last_checkpoint,
    )
