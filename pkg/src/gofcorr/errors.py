"""Exception and warning types raised across the package."""


class GofError(ValueError):
    """Base class for input and domain errors."""


class NonPositiveProbability(GofError):
    pass


class SumNotOne(GofError):
    pass


class TooFewCategories(GofError):
    pass


class NonPositiveSampleSize(GofError):
    pass


class DimensionMismatch(GofError):
    pass


class InvalidCounts(GofError):
    """Counts are not nonnegative integers or do not sum to ``n``."""


class DomainError(GofError):
    pass


class IndexOutOfRange(GofError, IndexError):
    pass


class OracleTooLarge(GofError):
    """Brute-force cumulant sums refused because ``k`` exceeds the cap."""


class TooManyOutcomes(GofError):
    """Exact enumeration refused because the composition count exceeds the guard."""

    def __init__(self, outcomes, limit):
        self.outcomes = outcomes
        self.limit = limit
        super().__init__(
            f"exact enumeration needs {outcomes} outcomes, above the limit of {limit}"
        )


class ValidityError(GofError):
    """|B| or |C| exceeds the 0.15*k rule of thumb."""


class NoRootInBracket(GofError):
    pass


class ConvergenceError(ArithmeticError):
    pass


class SmallProbabilityWarning(UserWarning):
    pass


class CorrectionWarning(UserWarning):
    """The corrected distribution misbehaves (clamped p-value, negative density)."""
