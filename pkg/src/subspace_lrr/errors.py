"""Error types shared across the package."""


class InvalidInputError(ValueError):
    """Data handed to an operation violates its preconditions."""


class InvalidParameterError(ValueError):
    """A scalar parameter is out of its admissible range."""


class ParseError(ValueError):
    """A dataset file is malformed. Carries the 1-based offending line."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NumericalError(RuntimeError):
    """A dense linear-algebra kernel failed to converge."""
