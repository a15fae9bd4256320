"""
Exception hierarchy for the solver.
Every error raised on purpose derives from SGMLError, itself a ValueError.
"""


class SGMLError(ValueError):
    """Base class for solver errors."""


class ConfigurationError(SGMLError):
    """Invalid grid, stencil or solver parameters."""


class DomainError(SGMLError):
    """A point, curve or seed lies outside the unit domain, or is degenerate."""


class NumericalError(SGMLError):
    """Non-finite values, non-positive pseudo-time steps or vanishing denominators."""


class OracleSizeError(SGMLError):
    """The system is too large for dense assembly."""


class ValidationError(SGMLError):
    """
    Raised by forms when one or more fields are invalid.
    The offending fields and messages are kept in ``errors``.
    """

    def __init__(self, errors: dict[str, str] | str):
        if isinstance(errors, str):
            errors = {"__all__": errors}
        self.errors = errors
        super().__init__("; ".join(f"{field}: {message}" for field, message in errors.items()))
