from typing import Optional


class MatrixFormatError(ValueError):
    """Matrix text that cannot be read as rows of '0'/'1'."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    pass


class InexactDivisionError(ArithmeticError):
    """A division that the formulas require to be exact left a remainder."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same exact quantity disagree."""


def exact_div(numerator: int, denominator: int, what: str = "quotient") -> int:
    q, rem = divmod(numerator, denominator)
    if rem:
        raise InexactDivisionError(
            f"{what}: {numerator} is not divisible by {denominator} (remainder {rem})"
        )
    return q
