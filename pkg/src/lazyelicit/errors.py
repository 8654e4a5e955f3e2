"""Exception types shared across the package."""


class DecisionSupportError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionMismatchError(DecisionSupportError):
    """Vectors, matrices or schemas disagree on their dimensions."""


class EvaluationError(DecisionSupportError):
    """An attribute value cannot be evaluated by its subutility function."""


class InvalidModelError(DecisionSupportError):
    """A utility model violates its scaling or range constraints."""


class UndefinedRatioError(DecisionSupportError):
    """A tradeoff ratio has a zero denominator and carries no weight signal."""


class InvalidAnswerError(DecisionSupportError):
    """An elicitation answer is out of range or does not fit the question."""


class SessionStateError(DecisionSupportError):
    """An elicitation operation was called in a state that does not allow it."""


class DataFormatError(DecisionSupportError):
    """A CSV or JSON input does not follow the documented format."""
