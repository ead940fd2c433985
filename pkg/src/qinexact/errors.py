"""Exception types raised by the solvers."""


class LineSearchExhausted(RuntimeError):
    """No trial constant passed the acceptance test within the doubling cap.

    With a certified oracle the search always terminates, so hitting the cap
    means the oracle violates its own certificate.
    """


class InfeasibleStart(ValueError):
    """The starting point is not a member of the feasible set."""


class ZeroGradient(ArithmeticError):
    """A step rule divided by a zero subgradient norm (the point is optimal)."""


class MissingGapEvaluator(LookupError):
    """The saddle problem carries no duality-gap evaluator."""


class BudgetExceeded(UserWarning):
    """Iteration budget ran out before the stopping certificate was reached."""
