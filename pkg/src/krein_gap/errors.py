"""Exception hierarchy.

Validation problems (bad shapes, broken invariants, out-of-domain inputs) derive
from :class:`ValidationError`; failures discovered while computing (divergent
limits, singular systems, disagreeing cross-checks) derive from
:class:`NumericError`.  The CLI maps the two families to exit codes 1 and 2.
"""


class KreinGapError(Exception):
    """Base class for all package errors."""


class ValidationError(KreinGapError, ValueError):
    """Input violates a documented invariant."""


class ShapeError(ValidationError):
    pass


class DomainError(ValidationError):
    """Input is well formed but outside the operation's domain."""


class InvalidModelError(ValidationError):
    pass


class NumericError(KreinGapError, ArithmeticError):
    """A computation could not be completed reliably."""


class DivergenceError(NumericError):
    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values


class IndeterminateLimitError(NumericError):
    pass


class InvertibilityError(NumericError):
    pass


class NotAnOperatorError(NumericError):
    """The contraction has eigenvalue 1, so its inverse Cayley image is a relation."""


class SpectralPointError(NumericError):
    pass


class PoleError(SpectralPointError):
    pass


class ConsistencyError(NumericError):
    """Two independent computation routes disagree."""


class QuadratureError(NumericError):
    pass
