"""Exception types shared across the package."""


class PartoptError(Exception):
    """Base class for all partopt errors."""


class DimensionError(PartoptError, ValueError):
    """A partition vector does not match the graph it is applied to."""


class FormatError(PartoptError, ValueError):
    """An instance document violates the file grammar.

    ``line`` is the 1-based line number the problem was detected on, or
    ``None`` when the document as a whole is at fault (e.g. truncation).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NodeLimitError(PartoptError, ValueError):
    """Exhaustive enumeration was asked to search more nodes than allowed."""


class GenSpecError(PartoptError, ValueError):
    """A random-instance spec is internally inconsistent."""


class ConfigError(PartoptError, ValueError):
    """A solver configuration violates its invariants."""
