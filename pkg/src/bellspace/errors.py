"""Domain exception hierarchy (malformed literal arguments still raise ValueError)."""


class BellspaceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDistributionError(BellspaceError, ValueError):
    """A probability table has a negative entry or fails normalization."""


class NullConditioningError(BellspaceError, ZeroDivisionError):
    """A conditional probability was requested on an event of probability zero."""


class MarginalInconsistencyError(BellspaceError, ValueError):
    """The four conditional blocks disagree on a one-side outcome marginal."""


class EmptyStreamError(BellspaceError, ValueError):
    """An estimator was fed zero trial records."""


class CsvSchemaError(BellspaceError, ValueError):
    """An event CSV violates the trial-record schema (message carries the row)."""


class ConfigError(BellspaceError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    """The config document is not syntactically valid (CLI exit code 2)."""


class ConfigValidationError(ConfigError):
    """The config parsed but its content is invalid (CLI exit code 3)."""
