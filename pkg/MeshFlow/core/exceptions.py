"""
This module defines the exception hierarchy of the package.

Every error raised on purpose by MeshFlow derives from `MeshFlowError`, and each
subclass also derives from the builtin that best describes it, so callers can
catch either. The cli module maps the hierarchy onto exit codes.
"""

class MeshFlowError(Exception):
    """Base class of every MeshFlow error."""

    exitCode: int = 1
    """Process exit code used by the command line frontend."""

class MeshFormatError(MeshFlowError, ValueError):
    """
    A mesh, point or manifest file could not be parsed.

    Attributes:
        lineNumber (int | None): 1-based line of the offending record, when known.
    """

    def __init__(self, message: str, lineNumber: int | None = None):
        super().__init__(message)
        self.lineNumber = lineNumber

class GeometryError(MeshFlowError, ValueError):
    """Degenerate or invalid geometry (empty shapes, zero extent, zero area)."""

class ShapeMismatchError(MeshFlowError, ValueError):
    """Array or tensor dimensions that do not agree."""

class ConfigError(MeshFlowError, ValueError):
    """
    An invalid configuration value or key.

    Attributes:
        lineNumber (int | None): 1-based line of the config file, when known.
    """

    def __init__(self, message: str, lineNumber: int | None = None):
        super().__init__(message)
        self.lineNumber = lineNumber

class CheckpointError(MeshFlowError, ValueError):
    """A checkpoint that cannot be loaded into the requested architecture."""

class TapeError(MeshFlowError, RuntimeError):
    """Misuse of a gradient tape (foreign output, repeated backward)."""

class DivergenceError(MeshFlowError, ArithmeticError):
    """
    A loss became non-finite during optimization or training.

    Attributes:
        trace: The loss trace collected up to and including the failing step.
    """

    exitCode: int = 2

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
