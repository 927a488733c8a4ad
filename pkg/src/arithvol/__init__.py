"""Covolumes of arithmetic hyperbolic orbifolds in odd dimension, with the
discriminant-bound search that isolates the smallest ones."""

from .errbounded import ErrBounded
from .errors import (ArithVolError, ParseError, PrecisionError, ResourceError,
                     ValidationError)

__all__ = ["ErrBounded", "ArithVolError", "ParseError", "PrecisionError",
           "ResourceError", "ValidationError"]
__version__ = "0.1.0"
