"""Exception hierarchy shared by every assembly space and solver."""


class AssemblyError(Exception):
    """Base class for all library errors."""


class DomainError(AssemblyError, ValueError):
    """An argument lies outside the domain of the operation (e.g. n = 0)."""


class EmptyTarget(DomainError):
    """The target object has size zero."""


class NotConstructible(DomainError):
    """The target contains an irreducible part that is not in the basis."""


class NoSuchIndex(DomainError):
    """No object of the requested composition has the requested index."""


class TooLarge(DomainError):
    """The object exceeds the configured cap for exact computation."""


class BudgetExceeded(AssemblyError, RuntimeError):
    """A computation ran past its node or wall-clock allowance."""
