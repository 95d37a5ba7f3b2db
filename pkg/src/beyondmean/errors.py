"""Exception hierarchy.

Every error raised by the library derives from :class:`BeyondMeanError`.
The CLI maps the three families below onto its exit codes:

* usage / domain problems -> 1
* data and parsing problems -> 2
* degenerate statistics -> 3
"""


class BeyondMeanError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(BeyondMeanError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class InfeasibleMomentsError(DomainError):
    """No Beta distribution has the requested mean and standard deviation."""


class UsageError(BeyondMeanError, ValueError):
    """A function was called with the wrong kind of argument."""


class DataError(BeyondMeanError, ValueError):
    """Input data cannot support the requested computation."""

    exit_code = 2


class InsufficientDataError(DataError):
    """Too few observations."""


class UnsupportedSizeError(DataError):
    """Sample size outside the range an algorithm is valid for."""


class ParseError(DataError):
    """Malformed CSV input. ``line`` is 1-based and counts the header."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HeaderError(ParseError):
    pass


class ScoreParseError(ParseError):
    pass


class LabelCountError(ParseError):
    pass


class PairingError(ParseError):
    pass


class DegenerateDataError(BeyondMeanError, ArithmeticError):
    """A statistic is undefined because some variance is zero."""

    exit_code = 3


class CVUndefinedError(DegenerateDataError):
    """Coefficient of variation requested for a non-positive mean."""
