"""Line ingestion, reversible whitespace tokenization and script/casing classes.

Everything here is a pure function over ``str``; the other modules build on it.
"""

from __future__ import annotations

import enum
import functools
import re
from typing import NamedTuple

import regex

__all__ = [
    "ScriptClass",
    "CasingPattern",
    "Token",
    "TokenizedText",
    "decode_bytes",
    "sanitize",
    "tokenize",
    "detokenize",
    "classify_casing",
    "classify_script",
    "is_upper_char",
    "is_lower_char",
]


class ScriptClass(enum.Enum):
    LATIN = "Latin"
    CYRILLIC = "Cyrillic"
    DIGIT = "Digit"
    MIXED = "Mixed"
    OTHER = "Other"


class CasingPattern(enum.Enum):
    NOCASE = "NoCase"
    LOWER = "Lower"
    UPPER = "Upper"
    TITLE = "Title"
    IRREGULAR = "Irregular"


class Token(NamedTuple):
    ws: str
    body: str


class TokenizedText(NamedTuple):
    """Tokens of one line plus any whitespace after the last token.

    ``detokenize`` concatenates ``ws + body`` for each token and appends
    ``trailing``, which reproduces the input exactly.
    """

    tokens: tuple[Token, ...]
    trailing: str = ""


# Code points removed at ingestion: control (Cc), format (Cf), line and
# paragraph separators. TAB is included because it separates bitext fields.
@functools.lru_cache(maxsize=None)
def _unprintable_re() -> re.Pattern[str]:
    return regex.compile(r"[\p{Cc}\p{Cf}\p{Zl}\p{Zp}]+")


@functools.lru_cache(maxsize=None)
def _unprintable_keep_tab_re() -> re.Pattern[str]:
    return regex.compile(r"[[\p{Cc}\p{Cf}\p{Zl}\p{Zp}]--\t]+", flags=regex.V1)


def sanitize(text: str, keep_tab: bool = False) -> tuple[str, bool]:
    """Drop non-printable characters; report whether anything was removed."""
    if text.isprintable():
        return text, False
    pattern = _unprintable_keep_tab_re() if keep_tab else _unprintable_re()
    cleaned = pattern.sub("", text)
    return cleaned, len(cleaned) != len(text)


def decode_bytes(raw: bytes, keep_tab: bool = False) -> tuple[str, bool] | None:
    """Decode one record, removing malformed UTF-8 and non-printable characters.

    Returns ``(line, cleaned)`` or ``None`` when nothing but whitespace remains.
    ``keep_tab`` is for whole bitext records, which are split on TAB afterwards.
    """
    try:
        text = raw.decode("utf-8")
        malformed = False
    except UnicodeDecodeError:
        text = raw.decode("utf-8", errors="ignore")
        malformed = True
    text, stripped = sanitize(text, keep_tab=keep_tab)
    if not text or text.isspace():
        return None
    return text, malformed or stripped


_TOKEN_RE = re.compile(r"(\s*)(\S+)")


def tokenize(line: str) -> TokenizedText:
    tokens = []
    end = 0
    for m in _TOKEN_RE.finditer(line):
        tokens.append(Token(m.group(1), m.group(2)))
        end = m.end()
    return TokenizedText(tuple(tokens), line[end:])


def detokenize(tt: TokenizedText) -> str:
    return "".join(ws + body for ws, body in tt.tokens) + tt.trailing


# A character is treated as cased only when case mapping actually changes it;
# letters such as MATHEMATICAL BOLD CAPITAL A have no lowercase and count as
# uncased, which keeps classify_casing(lower(x)) in {NoCase, Lower}.
def is_upper_char(c: str) -> bool:
    return c.lower() != c


def is_lower_char(c: str) -> bool:
    return c.lower() == c and c.upper() != c


def classify_casing(body: str) -> CasingPattern:
    if body.isascii() and body.islower():
        return CasingPattern.LOWER
    first: bool | None = None
    n_cased = 0
    seen_upper_after_first = False
    seen_lower = False
    for c in body:
        if is_upper_char(c):
            if first is None:
                first = True
            else:
                seen_upper_after_first = True
        elif is_lower_char(c):
            if first is None:
                first = False
            seen_lower = True
        else:
            continue
        n_cased += 1
    if first is None:
        return CasingPattern.NOCASE
    if not first and not seen_upper_after_first:
        return CasingPattern.LOWER
    if first and not seen_lower:
        return CasingPattern.UPPER if n_cased >= 2 else CasingPattern.TITLE
    if first and not seen_upper_after_first:
        return CasingPattern.TITLE
    return CasingPattern.IRREGULAR


_LATIN_RE = regex.compile(r"\p{Script=Latin}")
_CYRILLIC_RE = regex.compile(r"\p{Script=Cyrillic}")


def classify_script(body: str) -> ScriptClass:
    latin = cyrillic = False
    letters = digits = False
    for c in body:
        if c.isalpha():
            letters = True
            if _LATIN_RE.match(c):
                latin = True
            elif _CYRILLIC_RE.match(c):
                cyrillic = True
        elif c.isdigit():
            digits = True
    if latin and cyrillic:
        return ScriptClass.MIXED
    if latin:
        return ScriptClass.LATIN
    if cyrillic:
        return ScriptClass.CYRILLIC
    if not letters and digits:
        return ScriptClass.DIGIT
    return ScriptClass.OTHER


def script_letter_counts(text: str) -> tuple[int, int]:
    """Number of Latin and Cyrillic letters in ``text``."""
    latin = len(_LATIN_LETTERS_RE.findall(text))
    cyrillic = len(_CYRILLIC_LETTERS_RE.findall(text))
    return latin, cyrillic


_LATIN_LETTERS_RE = regex.compile(r"[\p{L}&&\p{Script=Latin}]", flags=regex.V1)
_CYRILLIC_LETTERS_RE = regex.compile(r"[\p{L}&&\p{Script=Cyrillic}]", flags=regex.V1)
