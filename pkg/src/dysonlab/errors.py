"""Exception types shared across the package."""


class DysonError(Exception):
    """Base class for package-specific errors."""


class PreconditionError(DysonError, ValueError):
    """A caller-supplied parameter violates an operation's contract."""


class CapExceededError(DysonError):
    """An enumeration request exceeds the configured free-site cap."""
