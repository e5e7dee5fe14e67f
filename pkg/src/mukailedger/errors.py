"""Exception hierarchy shared by every module."""


class LedgerError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LedgerError, ValueError):
    """Malformed or dimensionally inconsistent input."""


class ModelError(LedgerError):
    """A resolution model is internally inconsistent or degenerate."""


class ComputationFault(LedgerError):
    """Two independent computation paths disagreed (an invariant breach)."""
