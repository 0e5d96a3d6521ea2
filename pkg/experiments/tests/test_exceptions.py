import pytest
from pydantic import BaseModel, ValidationError

from clips.exceptions import EmptyForegroundError, MalformedFrameError
from experiments.exceptions import (
    EXIT_CHECKPOINT,
    EXIT_CONFIG,
    EXIT_DATA,
    EXIT_DIVERGED,
    ConfigError,
    EmptyTestSetError,
    EmptyTrainingSetError,
    MissingIdError,
    exit_code_for,
)
from fcnn.exceptions import (
    CheckpointMismatchError,
    CheckpointTruncatedError,
    LabelRangeError,
    TrainingDivergedError,
)


class Positive(BaseModel):
    value: int


def validation_error():
    try:
        Positive(value='many')
    except ValidationError as exc:
        return exc


@pytest.mark.parametrize('error, code', [
    (ConfigError('bad'), EXIT_CONFIG),
    (MissingIdError('no id'), EXIT_CONFIG),
    (CheckpointMismatchError('60 vs 10'), EXIT_CONFIG),
    (validation_error(), EXIT_CONFIG),
    (MalformedFrameError('garbage'), EXIT_DATA),
    (EmptyForegroundError('empty'), EXIT_DATA),
    (EmptyTestSetError('none'), EXIT_DATA),
    (EmptyTrainingSetError('none'), EXIT_DATA),
    (LabelRangeError('label 61'), EXIT_DATA),
    (CheckpointTruncatedError('short'), EXIT_CHECKPOINT),
    (TrainingDivergedError('nan', last_checkpoint='x'), EXIT_DIVERGED),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


def test_unexpected_errors_have_no_code():
    assert exit_code_for(KeyError('bug')) is None
