"""Exception types raised across exchci."""


class ExchciError(Exception):
    """Base class for every error the library raises on purpose."""


class InvalidArgumentError(ExchciError, ValueError):
    pass


class CapacityError(ExchciError, ValueError):
    pass


class PreconditionError(ExchciError, RuntimeError):
    pass


class UnsupportedGraphError(ExchciError, ValueError):
    pass


class FormatError(ExchciError, ValueError):
    """A malformed input file; `line` is 1-based, 0 when the problem is not tied to one line."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)
