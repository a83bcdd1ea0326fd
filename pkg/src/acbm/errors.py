"""Exception hierarchy shared by the whole package.

The CLI maps each branch to a distinct exit code, so new exceptions
should subclass one of the four branches below rather than Exception.
"""


class AcbmError(Exception):
    """Base class for all package errors."""


class ParseError(AcbmError):
    """Malformed input: bad JSON, bad rational literal, wrong file grammar."""


class ValidationError(AcbmError):
    """Structurally well-formed data that violates a semantic contract."""


class ShapeMismatch(ValidationError):
    """An array argument has the wrong shape or rank for the operation."""


class BadDimension(ValidationError):
    """A dimension parameter is out of range (n must be a positive integer)."""


class BadData(ValidationError):
    """Class data violates the constraints of the requested class."""


class InvalidStructure(ValidationError):
    """A structure tuple fails its axioms where a valid one is required."""


class InsufficientSamples(ValidationError):
    """A sampled linear system did not reach full rank; more samples needed."""


class UnknownClass(AcbmError):
    """An unrecognized class tag was requested."""


class Singular(AcbmError):
    """A matrix that must be invertible is not."""
