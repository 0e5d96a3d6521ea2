"""
Adam updates and the phased cyclical learning-rate schedule.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .exceptions import NonFiniteGradientError, ScheduleError, TensorShapeError
from .tensor import Tensor

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: Dict[str, Tensor] = field(default_factory=dict)
    v: Dict[str, Tensor] = field(default_factory=dict)


def adam_step(params: Dict[str, Tensor], grads: Dict[str, Tensor], state: AdamState, lr: float):
    """Update ``params`` in place from ``grads``; parameters without a gradient are untouched.

    Every gradient is checked before anything is mutated, so a rejected step
    leaves parameters and moments exactly as they were.
    """
    for name, grad in grads.items():
        if name not in params:
            raise KeyError(f"gradient for unknown parameter {name!r}")
        if grad.shape != params[name].shape:
            raise TensorShapeError(f"{name}: gradient shape {grad.shape} != parameter shape {params[name].shape}")
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradientError(f"non-finite gradient for {name}; step rejected")

    state.t += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for name, grad in grads.items():
        param = params[name]
        m = state.m.setdefault(name, np.zeros_like(param))
        v = state.v.setdefault(name, np.zeros_like(param))
        m[...] = b1 * m + (1.0 - b1) * grad
        v[...] = b2 * v + (1.0 - b2) * np.square(grad)
        m_hat = m / correction1
        v_hat = v / correction2
        param -= (lr * m_hat / (np.sqrt(v_hat) + state.epsilon)).astype(param.dtype, copy=False)


class LrPhase(BaseModel):
    start_epoch: int = Field(ge=1)
    end_epoch: int = Field(ge=1)
    lr_min: float = Field(gt=0)
    lr_max: Optional[float] = None
    mode: Literal['triangular', 'constant'] = 'triangular'

    @model_validator(mode='after')
    def check_bounds(self):
        if self.lr_max is None:
            self.lr_max = self.lr_min
        if self.end_epoch < self.start_epoch:
            raise ValueError(f"phase ends (epoch {self.end_epoch}) before it starts (epoch {self.start_epoch})")
        if self.lr_max < self.lr_min:
            raise ValueError(f"lr_max {self.lr_max} is below lr_min {self.lr_min}")
        if self.mode == 'constant' and self.lr_max != self.lr_min:
            raise ValueError("a constant phase has a single learning rate")
        return self


class LrSchedule(BaseModel):
    """Contiguous phases starting at epoch 1; triangular phases cycle with a half-period of ``step_size_epochs``."""

    phases: List[LrPhase]
    step_size_epochs: int = Field(default=2, ge=1)

    @model_validator(mode='after')
    def check_contiguous(self):
        if not self.phases:
            raise ValueError("a schedule needs at least one phase")
        if self.phases[0].start_epoch != 1:
            raise ValueError("the first phase must start at epoch 1")
        for previous, current in zip(self.phases, self.phases[1:]):
            if current.start_epoch != previous.end_epoch + 1:
                raise ValueError(
                    f"phases must be contiguous: epoch {previous.end_epoch} is followed by {current.start_epoch}"
                )
        return self

    @property
    def epochs(self) -> int:
        return self.phases[-1].end_epoch

    def phase_at(self, epoch: int) -> int:
        """1-based index of the phase covering ``epoch``."""
        for index, phase in enumerate(self.phases, start=1):
            if phase.start_epoch <= epoch <= phase.end_epoch:
                return index
        raise ScheduleError(f"epoch {epoch} is outside the schedule (1..{self.epochs})")

    def lr_at(self, epoch: int, iteration: int, iterations_per_epoch: int) -> float:
        return lr_at(self, epoch, iteration, iterations_per_epoch)


def lr_at(schedule: LrSchedule, epoch: int, iteration: int, iterations_per_epoch: int) -> float:
    """Learning rate for 0-based ``iteration`` within 1-based ``epoch``.

    Triangular phases restart their cycle at the phase's first iteration: cycle
    boundaries give exactly ``lr_min`` and the cycle midpoint exactly ``lr_max``.
    """
    if iterations_per_epoch < 1:
        raise ScheduleError(f"iterations_per_epoch must be >= 1, got {iterations_per_epoch}")
    if not 0 <= iteration < iterations_per_epoch:
        raise ScheduleError(f"iteration {iteration} outside 0..{iterations_per_epoch - 1}")
    phase = schedule.phases[schedule.phase_at(epoch) - 1]
    if phase.mode == 'constant':
        return phase.lr_min

    step = schedule.step_size_epochs * iterations_per_epoch
    position = ((epoch - phase.start_epoch) * iterations_per_epoch + iteration) % (2 * step)
    if position == 0:
        return phase.lr_min
    if position == step:
        return phase.lr_max
    height = 1.0 - abs(position / step - 1.0)
    lr = phase.lr_min + (phase.lr_max - phase.lr_min) * height
    return min(max(lr, phase.lr_min), phase.lr_max)


PHASE_RANGES = ((5e-4, 9.8e-4), (1e-4, 4e-4))
TAIL_LR = 4e-5


def default_schedule(epochs: int = 50, tail_epochs: int = 5, boundaries: Optional[Sequence[int]] = None) -> LrSchedule:
    """Two triangular phases followed by a constant tail.

    For 50 epochs the phases are 1-25, 26-45 and 46-50. Other epoch counts keep
    the same proportions unless ``boundaries`` gives the last epoch of the first
    two phases explicitly.
    """
    if epochs < 1:
        raise ScheduleError(f"epochs must be >= 1, got {epochs}")
    if boundaries is not None:
        first_end, head = (int(b) for b in boundaries)
        if not 1 <= first_end <= head <= epochs:
            raise ScheduleError(f"boundaries {tuple(boundaries)} do not fit {epochs} epochs")
    else:
        tail = min(tail_epochs, epochs // 2)
        head = epochs - tail
        first_end = max(1, round(head * 25 / 45))

    spans = [
        (1, first_end, *PHASE_RANGES[0], 'triangular'),
        (first_end + 1, head, *PHASE_RANGES[1], 'triangular'),
        (head + 1, epochs, TAIL_LR, TAIL_LR, 'constant'),
    ]
    phases = [
        LrPhase(start_epoch=start, end_epoch=end, lr_min=lo, lr_max=hi, mode=mode)
        for start, end, lo, hi, mode in spans
        if end >= start
    ]
    return LrSchedule(phases=phases)
