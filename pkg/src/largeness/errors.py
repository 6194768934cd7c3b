"""Exception types shared across the package."""


class LargenessError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(LargenessError, ValueError):
    """An operation was called with inputs outside its domain."""


class ResourceLimitError(LargenessError, RuntimeError):
    """A configured size limit was exceeded (coset count, subset sweep, ...)."""
