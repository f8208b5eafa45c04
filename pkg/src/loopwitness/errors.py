"""Exception hierarchy shared across the package."""


class LoopwitnessError(Exception):
    """Base class for all structured errors raised by this package."""


class DimensionMismatch(LoopwitnessError):
    """Operands disagree on vector/matrix dimensions."""


class EmptyPolyhedron(LoopwitnessError):
    """Operation requires a non-empty polyhedron (recession cone, MW split)."""


class PreconditionError(LoopwitnessError):
    """A documented operation precondition was violated by the caller."""


class InternalCheckError(LoopwitnessError):
    """A result failed its own re-verification; indicates a bug, never bad input."""


class LoopParseError(LoopwitnessError):
    """Loop source text rejected, with position information.

    `line` and `column` are 1-based; both are 0 when the error is not tied
    to a specific location (e.g. a malformed JSON body).
    """

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line:
            return f"{self.line}:{self.column}: {self.message}"
        return self.message


class StrictInequalityUnsupported(LoopParseError):
    """Strict relations (<, >) are outside the supported loop class."""


class UnsupportedDimension(LoopwitnessError):
    """Loops with more than two variables are not handled by the deciders."""
