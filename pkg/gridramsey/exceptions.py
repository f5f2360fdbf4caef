"""Exception hierarchy shared by every gridramsey module."""

__all__ = ['GridRamseyError', 'InputError', 'PreconditionError',
           'SearchBudgetExceeded', 'ConstructionError', 'InvariantError']


class GridRamseyError(Exception):
    """Base class of all errors raised by gridramsey."""


class InputError(GridRamseyError, ValueError):
    """Invalid argument, parameter domain, file content or config key."""


class PreconditionError(InputError):
    """An operation's documented precondition does not hold.

    ``column`` names the offending grid column when there is one.
    """

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class SearchBudgetExceeded(GridRamseyError):
    """An exact search ran out of nodes or wall-clock time.

    This is the *indeterminate* outcome: the searched structure may or may
    not exist.  It is never to be read as "none".
    """

    def __init__(self, message, nodes=0, elapsed_ms=0.0):
        super().__init__(message)
        self.nodes = nodes
        self.elapsed_ms = elapsed_ms


class ConstructionError(GridRamseyError):
    """A randomized construction gave up; ``diagnostics`` says why."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class InvariantError(GridRamseyError, AssertionError):
    """A deterministic invariant of a construction was violated."""
