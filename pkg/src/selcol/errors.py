class SelcolError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SelcolError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidDecomposition(SelcolError):
    pass


class CapacityError(SelcolError):
    """An instance parameter exceeds a configured solver limit."""


class BudgetExhausted(SelcolError):
    """The oracle ran out of its node or time budget before deciding."""


class PreconditionError(SelcolError):
    pass
