"""Builtin method catalog: string, character and integer-set operations.

Method names are matched without regard to case because specifications in
the wild spell the long hexadecimal helpers inconsistently
(``OddNumberofHexadecimal...`` vs ``OddNumberOfHexadecimal...``).  The typed
tree always carries the canonical spelling listed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .types import BOOL, CHAR, INT, INTSET, STR, IndexOutOfRange, SemType

HEX_CHARS = frozenset("0123456789abcdefABCDEF")
DIGITS = frozenset("0123456789")
LOWER = frozenset("abcdefghijklmnopqrstuvwxyz")
UPPER = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
LETTERS = LOWER | UPPER
ALNUM = LETTERS | DIGITS
LOWER_HEX_LETTERS = frozenset("abcdef")
UPPER_HEX_LETTERS = frozenset("ABCDEF")


@dataclass(frozen=True)
class Signature:
    name: str  # canonical spelling
    receiver: SemType
    params: tuple[SemType, ...]
    result: SemType
    impl: Callable
    # Parameters (by position) where a Char argument is accepted for a Str.
    char_ok: tuple[int, ...] = ()


def _hex_count(s: str) -> int:
    return sum(1 for c in s if c in HEX_CHARS)


def _all_in(s: str, cls: frozenset) -> bool:
    return len(s) > 0 and all(c in cls for c in s)


def _prefix(op: str, s: str, i: int) -> str:
    if i < 0:
        raise IndexOutOfRange(op, i)
    return s[:i]


def _fold(s: str) -> str:
    return "".join(chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in s)


def _char_at(s: str, i: int) -> str:
    if not 0 <= i < len(s):
        raise IndexOutOfRange("charAt", i)
    return s[i]


def _substring1(s: str, b: int) -> str:
    if not 0 <= b <= len(s):
        raise IndexOutOfRange("substring", b)
    return s[b:]


def _substring2(s: str, b: int, e: int) -> str:
    if not 0 <= b <= len(s):
        raise IndexOutOfRange("substring", b)
    if not b <= e <= len(s):
        raise IndexOutOfRange("substring", e)
    return s[b:e]


def _index_of(s: str, t: str, start: int = 0) -> int:
    return s.find(t, min(max(start, 0), len(s)))


# Hexadecimal family, whole-string and prefix forms share these predicates.
def no_hex(s: str) -> bool:
    return _hex_count(s) == 0


def all_hex(s: str) -> bool:
    return _all_in(s, HEX_CHARS)


def mix_hex(s: str) -> bool:
    k = _hex_count(s)
    return 0 < k < len(s)


def odd_hex(s: str) -> bool:
    return _hex_count(s) % 2 == 1


def even_hex(s: str) -> bool:
    return _hex_count(s) % 2 == 0


_HEX_FAMILY = {
    "NoHexadecimalCharacters": no_hex,
    "AllHexadecimalCharacters": all_hex,
    "MixHexadecimalNonHexadecimalCharacters": mix_hex,
    "OddNumberOfHexadecimalCharacters": odd_hex,
    "EvenNumberOfHexadecimalCharacters": even_hex,
}


def _first_chars(name: str, pred: Callable[[str], bool]) -> Callable[[str, int], bool]:
    def impl(s: str, i: int) -> bool:
        return pred(_prefix(name, s, i))

    return impl


_SIGNATURES: list[Signature] = [
    # String
    Signature("charAt", STR, (INT,), CHAR, _char_at),
    Signature("concat", STR, (STR,), STR, lambda s, t: s + t),
    Signature("contains", STR, (STR,), BOOL, lambda s, t: t in s, char_ok=(0,)),
    Signature("endsWith", STR, (STR,), BOOL, lambda s, t: s.endswith(t)),
    Signature("equals", STR, (STR,), BOOL, lambda s, t: s == t),
    Signature("equalsIgnoreCase", STR, (STR,), BOOL, lambda s, t: _fold(s) == _fold(t)),
    Signature("indexOf", STR, (STR,), INT, _index_of, char_ok=(0,)),
    Signature("indexOf", STR, (STR, INT), INT, _index_of, char_ok=(0,)),
    Signature("isEmpty", STR, (), BOOL, lambda s: len(s) == 0),
    Signature("lastIndexOf", STR, (STR,), INT, lambda s, t: s.rfind(t), char_ok=(0,)),
    Signature("length", STR, (), INT, len),
    Signature("startsWith", STR, (STR,), BOOL, lambda s, t: s.startswith(t)),
    Signature("substring", STR, (INT,), STR, _substring1),
    Signature("substring", STR, (INT, INT), STR, _substring2),
    Signature("Alphanumeric", STR, (), BOOL, lambda s: _all_in(s, ALNUM)),
    Signature("AllLowercaseCharacters", STR, (), BOOL, lambda s: _all_in(s, LOWER)),
    Signature("AllUppercaseCharacters", STR, (), BOOL, lambda s: _all_in(s, UPPER)),
    Signature("AllNumericalCharacters", STR, (), BOOL, lambda s: _all_in(s, DIGITS)),
    Signature("MixedCase", STR, (), BOOL, lambda s: any(c in LOWER for c in s) and any(c in UPPER for c in s)),
    Signature(
        "MixedCaseHexadecimalCharacters",
        STR,
        (),
        BOOL,
        lambda s: any(c in LOWER_HEX_LETTERS for c in s) and any(c in UPPER_HEX_LETTERS for c in s),
    ),
    Signature("AllLowercaseHexadecimal", STR, (), BOOL, lambda s: _all_in(s, DIGITS | LOWER_HEX_LETTERS)),
    Signature("AllUppercaseHexadecimal", STR, (), BOOL, lambda s: _all_in(s, DIGITS | UPPER_HEX_LETTERS)),
    *[Signature(name, STR, (), BOOL, pred) for name, pred in _HEX_FAMILY.items()],
    *[
        Signature(name + "inFirstChars", STR, (INT,), BOOL, _first_chars(name + "inFirstChars", pred))
        for name, pred in _HEX_FAMILY.items()
    ],
    # Character
    Signature("isDigit", CHAR, (), BOOL, lambda c: c in DIGITS),
    Signature("isLetter", CHAR, (), BOOL, lambda c: c in LETTERS),
    Signature("isLetterOrDigit", CHAR, (), BOOL, lambda c: c in ALNUM),
    Signature("isLowerCase", CHAR, (), BOOL, lambda c: c in LOWER),
    Signature("isLegal", CHAR, (), BOOL, lambda c: c in ALNUM or c == " "),
    Signature("isUpperCase", CHAR, (), BOOL, lambda c: c in UPPER),
    Signature("isSpace", CHAR, (), BOOL, lambda c: c == " "),
    Signature("isHexadecimal", CHAR, (), BOOL, lambda c: c in HEX_CHARS),
    Signature("asString", CHAR, (), STR, lambda c: c),
    # Integer sets
    Signature("size", INTSET, (), INT, len),
    Signature("isEmpty", INTSET, (), BOOL, lambda a: len(a) == 0),
    Signature("includes", INTSET, (INTSET,), BOOL, lambda a, b: bool(b) and b <= a),
    Signature("contains", INTSET, (INT,), BOOL, lambda a, x: x in a),
    Signature("intersection", INTSET, (INTSET,), INTSET, lambda a, b: a & b),
    Signature("union", INTSET, (INTSET,), INTSET, lambda a, b: a | b),
    Signature("difference", INTSET, (INTSET,), INTSET, lambda a, b: a - b),
    Signature("equals", INTSET, (INTSET,), BOOL, lambda a, b: a == b),
]

CATALOG: dict[tuple[str, str], list[Signature]] = {}
for _sig in _SIGNATURES:
    CATALOG.setdefault((_sig.receiver.kind, _sig.name.lower()), []).append(_sig)


def lookup(receiver: SemType, name: str) -> list[Signature]:
    return CATALOG.get((receiver.kind, name.lower()), [])


def signature_for(receiver: SemType, name: str, arity: int) -> Signature | None:
    for sig in lookup(receiver, name):
        if len(sig.params) == arity:
            return sig
    return None


def operation_names(receiver_kind: str) -> list[str]:
    return sorted({s.name for s in _SIGNATURES if s.receiver.kind == receiver_kind})
