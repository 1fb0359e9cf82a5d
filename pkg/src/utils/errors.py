"""
Error types shared by every component.

Library code raises these; the CLI in main.py maps them to exit codes.
"""

from typing import Any, Dict, Optional


class DksError(Exception):
    """Base class for all toolkit errors"""


class ParameterError(DksError, ValueError):
    """A parameter violates its documented range or a model invariant"""


class VertexIndexError(DksError, IndexError):
    """A vertex index lies outside [0, n)"""


class EmptySubsetError(DksError, ValueError):
    """An operation that needs a non-empty vertex subset received an empty one"""


class EnumerationSizeError(DksError, ValueError):
    """Exhaustive enumeration refused because the graph is above the size guard"""


class RetryExhaustedError(DksError):
    """A randomized construction did not produce a certified object within its budget"""

    def __init__(self, message: str, attempts: int, best_value: Optional[float] = None):
        super().__init__(message)
        self.attempts = attempts
        self.best_value = best_value


class SolverNotConvergedError(DksError):
    """The SDP solver hit max_iter before the residuals dropped below tol"""

    def __init__(self, message: str, best_solution: Any = None,
                 residuals: Optional[Dict[str, float]] = None):
        super().__init__(message)
        self.best_solution = best_solution
        self.residuals = residuals or {}


class InstanceFormatError(DksError, ValueError):
    """An instance or solution file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        full = f"{message} ({', '.join(location)})" if location else message
        super().__init__(full)
        self.line = line
        self.field = field


class FormatVersionError(InstanceFormatError):
    """The file declares a format_version this build does not read"""

    def __init__(self, found: Any, supported: int):
        super().__init__(f"Unsupported format_version {found!r}, expected {supported}",
                         field='format_version')
        self.found = found
        self.supported = supported
