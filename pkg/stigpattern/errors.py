"""Exception types raised across stigpattern."""

from typing import Optional


class StigPatternError(Exception):
    """Base class for all stigpattern errors."""


class InvalidMarkError(StigPatternError, ValueError):
    """A mark has non-finite or non-positive shape parameters."""


class InvalidParameterError(StigPatternError, ValueError):
    """A numeric parameter is outside its admissible range."""


class IncompatibleGridsError(StigPatternError, ValueError):
    """Two trails do not share the same grid."""


class UndefinedSimilarityError(StigPatternError, ValueError):
    """Similarity requested between two all-zero trails."""


class LengthMismatchError(StigPatternError, ValueError):
    """Two sequences that must have equal length do not."""


class NoActivationError(StigPatternError, ValueError):
    """Every receptive field returned zero similarity."""


class InvalidConfigError(StigPatternError, ValueError):
    """Configuration file or value is invalid."""


ConfigError = InvalidConfigError


class IngestError(StigPatternError):
    """Input file cannot be read as a positioning-event source."""

    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None):
        context = []
        if path is not None:
            context.append(f"file={path}")
        if row is not None:
            context.append(f"row={row}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)
        self.path = path
        self.row = row


class InfeasibleScheduleError(StigPatternError, ValueError):
    """A synthetic schedule does not describe a valid day."""


class PipelineStageError(StigPatternError):
    """A pipeline stage failed; carries the stage tag for diagnostics."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
