"""Exception hierarchy shared by all modules."""


class ToricError(Exception):
    """Base class for all library errors."""


class DimensionError(ToricError, ValueError):
    """Vectors or matrices of incompatible sizes."""


class DegenerateInputError(ToricError, ValueError):
    """Input is degenerate: zero vector, lower-dimensional hull, ..."""


class PolytopeError(ToricError, ValueError):
    pass


class FanError(ToricError, ValueError):
    pass


class GradingError(ToricError, ValueError):
    pass


class HypothesisViolation(ToricError, ValueError):
    """The input does not satisfy the hypotheses of the embedding construction."""


class InvariantFailure(ToricError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class BudgetExceeded(ToricError, RuntimeError):
    pass
