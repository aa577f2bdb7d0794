"""Shared exception types.

Validation problems (bad user input, mixed fields, malformed expressions)
raise ValueError subclasses; computational guards and cross-check failures
get their own classes so the CLI can map them to exit code 2.
"""


class ZccError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ZccError, ValueError):
    """Malformed or inconsistent user input."""


class GuardError(ZccError):
    """A desk-scale size guard was exceeded."""


class InconsistencyError(ZccError):
    """An exact cross-check failed (interpolation slack sample, oracle mismatch)."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class StructureError(ZccError):
    """A structural invariant that should hold mathematically was violated."""


class StabilizationCapError(ZccError):
    """A stabilization search hit its hard cap without settling."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace
