"""Exception types shared across the package."""


class MrlrcError(Exception):
    """Base class for all library errors."""


class ParameterError(MrlrcError):
    """Invalid parameters or a violated construction precondition."""


class BudgetError(MrlrcError):
    """An exhaustive enumeration would exceed the configured budget."""


class FormatError(MrlrcError):
    """A text artifact file is malformed or inconsistent."""
