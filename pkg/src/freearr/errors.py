"""Exception types shared across the package."""


class ArrangementError(Exception):
    """Base class for every error raised by freearr."""


class MixedFieldError(ArrangementError):
    pass


class EqualLinesError(ArrangementError):
    pass


class DuplicateLineError(ArrangementError):
    pass


class EmptyArrangementError(ArrangementError):
    pass


class SingleLineError(ArrangementError):
    pass


class NotLogarithmicError(ArrangementError):
    pass


class PreconditionError(ArrangementError):
    pass


class BoundViolatedError(ArrangementError):
    pass


class NonGenericLambdaError(ArrangementError):
    pass


class ValidationFailedError(ArrangementError):
    pass


class BadDiscriminantError(ArrangementError):
    pass


class ArrangementSyntaxError(ArrangementError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvariantViolation(ArrangementError):
    """An internal cross-check disagreed; indicates a bug, not bad input."""
