"""Exception types raised across the package."""

from __future__ import annotations


class EpvError(Exception):
    """Base class for all package errors."""


class NotPrimePower(EpvError, ValueError):
    pass


class DivisionByZero(EpvError, ZeroDivisionError):
    pass


class UnknownClass(EpvError, KeyError):
    pass


class UnknownPoint(EpvError, KeyError):
    pass


class BadEll(EpvError, ValueError):
    pass


class BadSize(EpvError, ValueError):
    pass


class BadArgs(EpvError, ValueError):
    pass


class BadK(BadArgs):
    pass


class EmptyList(EpvError, ValueError):
    pass


class Infeasible(EpvError, ValueError):
    pass


class UnknownFamily(EpvError, ValueError):
    pass


class NoConvergence(EpvError, RuntimeError):
    pass


class NoFeasiblePoint(EpvError, RuntimeError):
    pass


class ParseError(EpvError, ValueError):
    """Malformed graph or spectrum file.  ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
