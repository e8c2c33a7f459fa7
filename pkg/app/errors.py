"""Exception types shared by the chord diagram toolkit."""
from __future__ import annotations

from typing import Any, Dict, Optional


class SchordError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1

    def __init__(self, message: str, path: Optional[str] = None):
        self.message = message
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"error": self.message, "type": type(self).__name__}
        if self.path:
            data["path"] = self.path
        return data


class InputError(SchordError):
    """Malformed input file, unknown name or bad flag."""

    exit_code = 2


class ShapeError(SchordError):
    """Arity, shape or mode mismatch between operands."""

    exit_code = 2


class DegreeError(SchordError):
    """A cochain degree exceeds the configured truncation."""

    exit_code = 2


class NotContainedError(SchordError):
    """Image of the incoming map is not inside the kernel of the outgoing one."""

    def __init__(self, message: str = "image not contained in kernel", path: Optional[str] = None):
        super().__init__(message, path)


class CohomologyError(SchordError):
    """An induced map fails to send coboundaries to coboundaries."""

    def __init__(self, message: str = "not well defined on cohomology", path: Optional[str] = None):
        super().__init__(message, path)


class TracingError(SchordError):
    """Boundary tracing failed on a diagram that passed validation."""
