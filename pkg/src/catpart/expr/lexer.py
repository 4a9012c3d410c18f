"""Tokenizer for the choice-expression language."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError, UnterminatedChar, UnterminatedString


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int
    offset: int

    def __repr__(self) -> str:
        return f"{self.kind}({self.lexeme})" if self.kind in _VALUED else self.kind


_VALUED = {"INTEGER_LITERAL", "FLOATING_POINT_LITERAL", "STRING_LITERAL", "CHARACTER_LITERAL", "IDENTIFIER"}

# Longest match first.
_OPERATORS = [
    ("<<", "LSHIFT"),
    ("==", "EQ"),
    ("<=", "LE"),
    (">=", "GE"),
    ("!=", "NE"),
    ("||", "SC_OR"),
    ("&&", "SC_AND"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("[", "LBRACKET"),
    ("]", "RBRACKET"),
    ("{", "LBRACE"),
    ("}", "RBRACE"),
    (",", "COMMA"),
    (".", "DOT"),
    ("<", "LT"),
    (">", "GT"),
    ("!", "NOT"),
    ("~", "TILDE"),
    ("+", "PLUS"),
    ("-", "MINUS"),
    ("*", "MUL"),
    ("/", "DIV"),
    ("&", "BIT_AND"),
    ("|", "BIT_OR"),
    ("^", "POWER"),
    ("%", "MOD"),
]

_ESCAPES = {"n": "\n", "t": "\t", "b": "\b", "r": "\r", "f": "\f", "\\": "\\", "'": "'", '"': '"'}
_WS = " \t\n\r\f"


def _is_letter(c: str) -> bool:
    return ("a" <= c <= "z") or ("A" <= c <= "Z") or c == "_"


def _is_digit(c: str) -> bool:
    return "0" <= c <= "9"


def unescape_string(body: str) -> str:
    """Decode the escapes of a STRING_LITERAL body (quotes stripped)."""
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            out.append(_ESCAPES[body[i + 1]])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def escape_string(s: str) -> str:
    rev = {v: k for k, v in _ESCAPES.items() if k != "'"}
    return "".join("\\" + rev[c] if c in rev else c for c in s)


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; the list always ends with an EOF token."""
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in _WS:
            advance(1)
            continue
        start, sl, sc = i, line, col
        if _is_letter(c):
            j = i + 1
            while j < n and (_is_letter(source[j]) or _is_digit(source[j])):
                j += 1
            kind = "IDENTIFIER"
        elif _is_digit(c) or (c == "." and i + 1 < n and _is_digit(source[i + 1])):
            j, kind = _scan_number(source, i)
        elif c == '"':
            j = i + 1
            while True:
                if j >= n or source[j] in "\n\r":
                    raise UnterminatedString("unterminated string literal", sl, sc)
                if source[j] == "\\":
                    if j + 1 >= n or source[j + 1] not in _ESCAPES:
                        raise LexError("invalid escape sequence", sl, sc + (j - i))
                    j += 2
                    continue
                if source[j] == '"':
                    j += 1
                    break
                j += 1
            kind = "STRING_LITERAL"
        elif c == "'":
            if i + 2 < n and source[i + 1] not in "'\\\n\r" and source[i + 2] == "'":
                j = i + 3
                kind = "CHARACTER_LITERAL"
            else:
                raise UnterminatedChar("character literal must hold exactly one character", sl, sc)
        else:
            for sym, kind in _OPERATORS:
                if source.startswith(sym, i):
                    j = i + len(sym)
                    break
            else:
                raise LexError(f"unexpected character {c!r}", sl, sc)
        toks.append(Token(kind, source[start:j], sl, sc, start))
        advance(j - i)
    toks.append(Token("EOF", "", line, col, n))
    return toks


def _scan_number(s: str, i: int) -> tuple[int, str]:
    n = len(s)
    j = i
    while j < n and _is_digit(s[j]):
        j += 1
    kind = "INTEGER_LITERAL"
    if j < n and s[j] == "." and not (j + 1 < n and _is_letter(s[j + 1])):
        # "3.x" is a receiver followed by a method call, not a float.
        j += 1
        while j < n and _is_digit(s[j]):
            j += 1
        kind = "FLOATING_POINT_LITERAL"
    if j < n and s[j] in "eE":
        k = j + 1
        if k < n and s[k] in "+-":
            k += 1
        if k < n and _is_digit(s[k]):
            j = k
            while j < n and _is_digit(s[j]):
                j += 1
            kind = "FLOATING_POINT_LITERAL"
    return j, kind
