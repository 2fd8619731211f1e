"""Exception types raised across the toolkit."""


class DimensionError(ValueError):
    """Matrix or register shape does not fit the operation."""


class BoundsError(ValueError):
    """Index, qubit count, or subset outside its allowed range."""


class DomainError(ValueError):
    """Scalar argument outside the function's domain."""


class RegimeError(ValueError):
    """Exponent outside the regime where a monogamy statement applies."""


class ValidationError(ValueError):
    """A value violates a physical invariant (norm, trace, positivity)."""


class SchemaError(ValidationError):
    """A state file does not match the JSON schema.

    ``path`` and ``field`` locate the offending entry.
    """

    def __init__(self, message, path=None, field=None):
        self.path = path
        self.field = field
        where = ", ".join(
            s for s in (f"file {path}" if path else "", f"field '{field}'" if field else "") if s
        )
        super().__init__(f"{message} ({where})" if where else message)


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the negative clamp threshold."""


class NumericalError(ArithmeticError):
    """Iterative routine failed to converge."""
