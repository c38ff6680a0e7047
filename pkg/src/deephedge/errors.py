"""Exception hierarchy shared across the package.

Validation-type failures map to CLI exit code 2, compatibility refusals to 3.
"""


class DeepHedgeError(Exception):
    """Base class for all package errors."""


class ValidationError(DeepHedgeError, ValueError):
    exit_code = 2


class ConfigError(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class InsufficientDataError(ValidationError):
    pass


class SplitError(ValidationError):
    pass


class EpisodeRangeError(ValidationError, IndexError):
    pass


class ProtocolError(DeepHedgeError, RuntimeError):
    """Environment used out of order, e.g. ``step`` after ``done``."""


class TrainingError(DeepHedgeError, FloatingPointError):
    pass


class CheckpointError(DeepHedgeError):
    exit_code = 2


class IncompatibilityError(DeepHedgeError):
    """Artifacts that disagree on their provenance fingerprints."""
    exit_code = 3


class IncompatibleCheckpointError(CheckpointError, IncompatibilityError):
    exit_code = 3
