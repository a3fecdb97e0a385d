"""Exception types raised across the package."""


class WalkGFError(Exception):
    """Base class for all package errors."""


class ValidationError(WalkGFError, ValueError):
    """Input graph, node set, link set or query is malformed."""


class EmptyGraphError(ValidationError):
    """An operation would leave a network with no nodes."""


class OrderMismatchError(WalkGFError, ValueError):
    """Two series (or series matrices) with different truncation orders were combined."""


class NotInvertibleInRing(WalkGFError, ArithmeticError):
    """The constant term of a series (or series matrix) is not invertible."""


class ConvergenceGuardError(WalkGFError, ValueError):
    """A numeric evaluation point lies outside (0, 1/lambda_max)."""

    def __init__(self, value, bound, what="x"):
        self.value = value
        self.bound = bound
        super().__init__(
            f"{what}={value} is outside the convergence region; "
            f"require {what} < 1/lambda_max = {bound:.12g}"
        )
