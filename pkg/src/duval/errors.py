"""Exception hierarchy shared by all modules."""


class DuvalError(Exception):
    """Base class for domain errors raised by this package."""

    code = "domain_error"


class PreconditionError(DuvalError, ValueError):
    code = "precondition"


class FieldError(DuvalError, ArithmeticError):
    """A root or solution does not exist in the Gaussian rationals."""

    code = "field"


class UnclassifiedError(DuvalError):
    """A germ is not recognizably ADE within the available precision."""

    code = "unclassified"


class BookkeepingError(DuvalError):
    """No curve-tracking rule applies at some stage of a resolution."""

    code = "bookkeeping"


class ParseError(DuvalError, ValueError):
    code = "parse"

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
