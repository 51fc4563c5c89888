"""Exception types raised across the package."""

from __future__ import annotations


class GCError(Exception):
    """Base class for all package errors."""


class ParseError(GCError, ValueError):
    """Malformed literal or input file.

    ``path`` and ``line`` are filled in when the error comes from a file.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class GeometryError(GCError, ValueError):
    pass


class ParameterError(GCError, ValueError):
    pass


class DimensionError(GCError, ValueError):
    pass


class EncodingError(GCError, ValueError):
    def __init__(self, letter: str, position: int):
        self.letter = letter
        self.position = position
        super().__init__(f"unknown amino-acid code {letter!r} at position {position}")


class InputError(GCError, ValueError):
    pass


class ClosureError(GCError, ValueError):
    """An ideal is missing a predecessor; ``edge`` is the violating (pred, node) pair."""

    def __init__(self, edge: tuple[int, int]):
        self.edge = edge
        super().__init__(f"not an ideal: edge {edge[0]} -> {edge[1]} leaves the set open")


class NotOptimalError(GCError, ValueError):
    pass


class AssumptionError(GCError, ValueError):
    pass


class EnvelopeRangeError(GCError, ValueError):
    pass


class OracleCapError(GCError):
    pass
