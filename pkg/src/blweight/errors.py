"""Exception hierarchy shared by every module.

The CLI maps :class:`InputError` to exit code 2 and
:class:`PreconditionError` to exit code 1.
"""


class BLWeightError(Exception):
    pass


class InputError(BLWeightError, ValueError):
    """Malformed or inconsistent input data."""


class PreconditionError(BLWeightError, ValueError):
    """A mathematical hypothesis required by an operation does not hold."""


class CapExceededError(PreconditionError):
    """A size cap was exceeded; raise the cap explicitly to proceed."""


class InvariantError(BLWeightError, RuntimeError):
    """An internal invariant failed. This indicates a bug, not bad input."""
