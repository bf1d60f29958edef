"""Exception hierarchy shared across the package."""


class SeqDesignError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(SeqDesignError):
    """A dataset file does not match its declared schema."""


class ParseError(SeqDesignError):
    """A cell or file could not be parsed as numeric data."""


class ValidationError(SeqDesignError):
    """Data violates an invariant (NaN/inf, non-boolean values, ...)."""


class GeometryError(SeqDesignError):
    """An airfoil trace is malformed or cannot be resampled."""


class CapacityError(SeqDesignError):
    """A reference set exceeds the regressor's row capacity."""


class UndefinedMetricError(SeqDesignError):
    """A metric is undefined for the given inputs (e.g. all-zero targets)."""


class GenerationError(SeqDesignError):
    """A sequential generation call failed mid-sequence."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ConfigError(SeqDesignError):
    """An experiment config file is missing, malformed, or has unknown keys."""


class TransportError(SeqDesignError):
    """The remote regressor service could not be reached."""


class ProtocolError(SeqDesignError):
    """The remote regressor service returned an invalid response."""
