from __future__ import annotations


class ExprError(Exception):
    """Base class for static errors in choice expressions and selectors."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class LexError(ExprError):
    pass


class UnterminatedString(LexError):
    pass


class UnterminatedChar(LexError):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, line: int = 1, column: int = 1, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(message, line, column)
        self.expected = expected


class UnsupportedOperator(ParseError):
    pass


class TypeError_(ExprError):
    """Static typing failure (named to avoid shadowing the builtin)."""


class UnknownIdentifier(TypeError_):
    pass


class NotBoolean(TypeError_):
    pass


class BadArgument(TypeError_):
    pass


class UnknownOperation(TypeError_):
    pass
