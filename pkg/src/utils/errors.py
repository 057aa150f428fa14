"""Exception hierarchy for the application."""


class PuckError(Exception):
    """Base class for every error raised by the library."""


class ArgumentError(PuckError, ValueError):
    """An argument violates an operation's precondition."""


class IndexRangeError(PuckError, IndexError):
    """A tick index lies outside the series."""


class InsufficientDataError(PuckError, ValueError):
    """Too few ticks, residuals or surviving bins for the requested operation."""


class DegenerateFitError(PuckError):
    """The likelihood is unbounded, e.g. every residual is exactly zero."""


class NoBarrierError(PuckError):
    """The potential has no local maximum separating a well from an open slope."""


class IngestError(PuckError, OSError):
    """An input file could not be read."""


class EmptyInputError(PuckError):
    """An input file contained no valid rows."""


class DivergenceError(PuckError):
    """A simulated trajectory left the finite floating-point range."""
