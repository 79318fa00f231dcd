"""Shared exception types.

Undecided outcomes are values, never exceptions; exceptions mark bad input,
violated preconditions, exhausted resources, or internal contract breaches.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class PreconditionError(InputError):
    """A documented operation precondition does not hold."""


class RamifiedPrimeError(InputError):
    """A prime dividing the discriminant was used where an unramified one is required."""


class ResourceError(RuntimeError):
    """Exhaustive computation refused: object too large for the configured bounds."""


class ContractViolation(RuntimeError):
    """An internal guarantee failed; indicates a bug, never a bad input."""
