"""Errors raised by experiment orchestration, and the process exit codes they map to."""
from pydantic import ValidationError

from clips.exceptions import ClipError
from fcnn.exceptions import (
    CheckpointError,
    CheckpointMismatchError,
    FreezeError,
    LabelRangeError,
    ModelInputError,
    ScheduleError,
    TrainingDivergedError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_CHECKPOINT = 4
EXIT_DIVERGED = 5


class ExperimentError(Exception):
    """Base class for experiment errors."""


class ConfigError(ExperimentError, ValueError):
    """Run configuration or protocol file is invalid."""


class SplitError(ExperimentError, ValueError):
    pass


class MissingIdError(SplitError):
    """A sample lacks the subject/camera id a protocol splits on."""


class EmptyTestSetError(ExperimentError, ValueError):
    pass


class EmptyTrainingSetError(ExperimentError, ValueError):
    pass


class BenchmarkError(ExperimentError, ValueError):
    pass


_EXIT_CODES = (
    (TrainingDivergedError, EXIT_DIVERGED),
    (CheckpointMismatchError, EXIT_CONFIG),
    (CheckpointError, EXIT_CHECKPOINT),
    (ClipError, EXIT_DATA),
    (EmptyTestSetError, EXIT_DATA),
    (EmptyTrainingSetError, EXIT_DATA),
    (LabelRangeError, EXIT_DATA),
    (ConfigError, EXIT_CONFIG),
    (SplitError, EXIT_CONFIG),
    (BenchmarkError, EXIT_CONFIG),
    (ValidationError, EXIT_CONFIG),
    (FreezeError, EXIT_CONFIG),
    (ScheduleError, EXIT_CONFIG),
    (ModelInputError, EXIT_CONFIG),
)


def exit_code_for(exc: BaseException):
    """Documented exit code for ``exc``, or None when it is not an expected failure."""
    for error_class, code in _EXIT_CODES:
        if isinstance(exc, error_class):
            return code
    return None
