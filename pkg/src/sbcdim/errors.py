"""Exception types shared across the package.

The CLI maps these onto exit codes: InvalidInput -> 2,
OutsideHypotheses -> 3, InvariantViolation -> 1.
"""


class SbcdimError(Exception):
    pass


class InvalidInput(SbcdimError, ValueError):
    """Malformed or out-of-range arguments."""


class OutsideHypotheses(SbcdimError):
    """Well-formed input that no implemented rule or theorem covers."""


class InvariantViolation(SbcdimError, AssertionError):
    """An internal consistency check failed. Always a bug."""
