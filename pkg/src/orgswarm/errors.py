"""Exception types shared across the package."""


class OrgswarmError(Exception):
    """Base class for all orgswarm errors."""


class DimensionMismatchError(OrgswarmError, ValueError):
    """Operands have incompatible dimensionality."""


class InvalidParameterError(OrgswarmError, ValueError):
    """A numeric parameter is outside its legal range."""


class ConfigError(OrgswarmError, ValueError):
    """An experiment configuration is invalid.

    Carries the offending field names in ``fields`` so callers can report
    every problem at once.
    """

    def __init__(self, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.fields = fields or []


class InvariantViolation(OrgswarmError, RuntimeError):
    """An internal simulation invariant was broken (should be unreachable)."""
