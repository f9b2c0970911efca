"""Exception hierarchy shared by all gridhard modules."""


class InputError(ValueError):
    """Caller supplied a malformed or out-of-contract argument."""


class ParseError(InputError):
    """Text input could not be parsed; carries a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetError(RuntimeError):
    """A configured resource budget was exceeded."""

    def __init__(self, message, site=None):
        self.site = site
        super().__init__(message)


class RetryExhaustedError(BudgetError):
    """Randomized construction failed within its retry budget."""

    def __init__(self, message, best_depth=None):
        super().__init__(message)
        self.best_depth = best_depth


class ConstructionError(RuntimeError):
    """A generated artifact failed one of its own structural certificates."""


class DecodeError(RuntimeError):
    """A solution object does not have the structure the decoder requires."""
