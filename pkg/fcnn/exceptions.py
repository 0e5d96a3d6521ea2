"""Errors raised by the network engine."""


class FcnnError(Exception):
    """Base class for engine errors."""


class TensorShapeError(FcnnError, ValueError):
    """Shape, buffer length or element count does not match."""


class TensorAxisError(FcnnError, ValueError):
    """An axis argument is out of range for the tensor rank."""


class KernelError(FcnnError, ValueError):
    """A layer kernel received incompatible inputs (channels, kernel extents, cache)."""


class MissingCacheError(FcnnError):
    """A backward pass was requested without the matching forward cache."""


class StaleCacheError(MissingCacheError):
    """The forward cache was already consumed or parameters changed since it was built."""


class LabelRangeError(FcnnError, ValueError):
    pass


class ModelInputError(FcnnError, ValueError):
    """The batch handed to the network has the wrong shape."""


class FreezeError(FcnnError, ValueError):
    pass


class ScheduleError(FcnnError, ValueError):
    """Learning-rate schedule is malformed or queried outside its coverage."""


class NonFiniteGradientError(FcnnError, FloatingPointError):
    pass


class TrainingDivergedError(FcnnError):
    """Loss became non-finite; the last good checkpoint is left in place."""

    def __init__(self, message, last_checkpoint=None):
        super().__init__(message)
        self.last_checkpoint = last_checkpoint


class CheckpointError(FcnnError):
    """Base class for checkpoint read/write failures."""


class CheckpointMissingError(CheckpointError, FileNotFoundError):
    pass


class CheckpointMagicError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass


class CheckpointFormatError(CheckpointError):
    """Header is unreadable or inconsistent with the payload."""


class CheckpointMismatchError(CheckpointError):
    """Checkpoint class count differs from the requested configuration."""
