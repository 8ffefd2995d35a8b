"""Exception types raised across the package."""


class CapacityError(ValueError):
    """Requested size exceeds a configured bound or a series' truncation order."""


class SizeMismatchError(ValueError):
    """Two trees of different sizes were compared."""


class PastSingularityError(ArithmeticError):
    """A negative radicand was met while evaluating the continued square root."""


class BracketError(RuntimeError):
    """A root-finding bracket does not enclose a sign change."""


class PrecisionError(ArithmeticError):
    """Numerical derivatives at two step sizes disagree beyond tolerance."""


class DegenerateDistributionError(ValueError):
    """The distribution has zero variance."""


class BFileError(ValueError):
    """Malformed b-file content, or a value conflicting with a known prefix."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
