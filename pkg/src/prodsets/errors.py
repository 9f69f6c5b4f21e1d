"""Exception hierarchy shared by every module."""


class ProdsetsError(Exception):
    """Base class for all package errors."""


class DomainError(ProdsetsError, ValueError):
    """An argument violates the documented precondition of an operation."""


class OutOfRangeError(DomainError, IndexError):
    """An integer lies outside the range covered by a table or window."""


class CapacityError(ProdsetsError, MemoryError):
    """An allocation would exceed the configured memory budget."""


class InfeasibleError(ProdsetsError):
    """No parameter pair satisfies the requested density inequalities.

    ``best`` carries the best margins found so the caller can report them.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best or {}


class AuditFailure(ProdsetsError, AssertionError):
    """A theorem-backed inequality was violated; this means a bug."""
