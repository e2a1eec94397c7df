"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(Exception):
    """Malformed instance or graph file. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class GuardExceeded(Exception):
    """A size guard refused to run an exponential step. Carries the offending value."""

    def __init__(self, what: str, value: int, limit: int):
        super().__init__(f"{what} = {value} exceeds guard {limit}")
        self.what = what
        self.value = value
        self.limit = limit


class GenerationError(Exception):
    """Random instance generation could not satisfy its structural constraints."""
