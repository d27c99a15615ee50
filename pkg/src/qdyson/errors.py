"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller violated an operation's precondition."""


class InternalError(RuntimeError):
    """An internal invariant was broken; always a bug, never user input."""
