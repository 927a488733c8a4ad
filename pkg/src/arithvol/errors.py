"""Exception hierarchy shared by all modules."""


class ArithVolError(Exception):
    """Base class for every error raised by :mod:`arithvol`."""


class ValidationError(ArithVolError, ValueError):
    """Input data violates a structural invariant."""


class ParseError(ArithVolError, ValueError):
    """A field-table record could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PrecisionError(ArithVolError, ArithmeticError):
    """The requested tolerance cannot be met with the configured limits."""

    def __init__(self, message, achievable=None):
        self.achievable = achievable
        super().__init__(message)


class ResourceError(ArithVolError, MemoryError):
    """A computation would exceed the configured memory budget."""
