"""Errors raised while reading and preparing depth clips."""


class ClipError(Exception):
    """Base class for data pipeline errors."""


class MalformedFrameError(ClipError):
    """A frame file could not be decoded as an image."""


class BitDepthError(ClipError):
    """A frame decoded fine but is not 16-bit single-channel."""


class EmptyForegroundError(ClipError, ValueError):
    """Every pixel of every selected frame is masked background."""


class DatasetRootError(ClipError, FileNotFoundError):
    pass


class ManifestError(ClipError, ValueError):
    """A manifest file is missing required columns or holds unusable rows."""


class EmptyVideoError(ClipError):
    pass
