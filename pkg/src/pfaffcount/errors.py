"""Exception types shared across the engine."""


class ConsistencyError(ArithmeticError):
    """An identity that the theory guarantees failed to hold at runtime.

    Raised, for instance, when a division that must be exact leaves a
    remainder.  Seeing one of these means a bug, never bad user input.
    """


class Cancelled(RuntimeError):
    """Raised when a cooperative cancellation token fires."""
