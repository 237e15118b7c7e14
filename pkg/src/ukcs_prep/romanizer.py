"""Reversible romanization of Ukrainian Cyrillic into Czech-style Latin.

Latin (and otherwise ambiguous) characters already present in the source are
wrapped verbatim in ``⟦…⟧``; a middle dot separates outputs that would
otherwise be read back as a digraph (``цг`` -> ``c·h``, not ``х``).
"""

from __future__ import annotations

import enum
import functools
import itertools
import re
from array import array
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping

import regex

from . import _backend

__all__ = [
    "TableError",
    "UnbalancedDelimiter",
    "TranslitTable",
    "RomanizationMode",
    "default_czech_table",
    "table_for",
    "romanize",
    "deromanize",
]

SEPARATOR = "·"
LATIN_OPEN = "⟦"
LATIN_CLOSE = "⟧"

# Lowercase Ukrainian letter -> lowercase Latin output.
CZECH_ENTRIES: dict[str, str] = {
    "а": "a",
    "б": "b",
    "в": "v",
    "г": "h",
    "ґ": "g",
    "д": "d",
    "е": "e",
    "є": "je",
    "ж": "ž",
    "з": "z",
    "и": "y",
    "і": "i",
    "ї": "ji",
    "й": "j",
    "к": "k",
    "л": "l",
    "м": "m",
    "н": "n",
    "о": "o",
    "п": "p",
    "р": "r",
    "с": "s",
    "т": "t",
    "у": "u",
    "ф": "f",
    "х": "ch",
    "ц": "c",
    "ч": "č",
    "ш": "š",
    "щ": "šč",
    "ь": "ʼ",
    "ю": "ju",
    "я": "ja",
}


class TableError(ValueError):
    """A transliteration table that cannot round-trip."""


class UnbalancedDelimiter(ValueError):
    def __init__(self, position: int):
        super().__init__(f"unterminated Latin run starting at offset {position}")
        self.position = position


class RomanizationMode(enum.Enum):
    CZECH = "cs"


@functools.lru_cache(maxsize=None)
def _script_chars(script: str) -> frozenset[str]:
    pattern = regex.compile(rf"\p{{Script={script}}}")
    universe = "".join(chr(i) for i in range(0x20000) if not 0xD800 <= i < 0xE000)
    return frozenset(pattern.findall(universe))


def _title(s: str) -> str:
    return s[:1].upper() + s[1:]


def _char_class(chars: Iterable[str]) -> str:
    """Regex character class body covering ``chars``, compressed into ranges."""
    points = sorted(ord(c) for c in chars)
    parts = []
    for _, group in itertools.groupby(enumerate(points), key=lambda t: t[1] - t[0]):
        run = [p for _, p in group]
        lo, hi = chr(run[0]), chr(run[-1])
        parts.append(re.escape(lo) if lo == hi else f"{re.escape(lo)}-{re.escape(hi)}")
    return "".join(parts)


@dataclass(frozen=True)
class _Plan:
    """Precomputed lookup structures shared by both kernel backends."""

    sep: str
    open: str
    close: str
    escape: frozenset[str]
    # covered source char -> key index; keys are the lowercase entries
    index: dict[str, int]
    keys: tuple[str, ...]
    upper_keys: tuple[str, ...]
    lower_out: tuple[str, ...]
    title_out: tuple[str, ...]
    upper_out: tuple[str, ...]
    is_upper: frozenset[str]
    # sep_after[i * n + j] == 1 when key j directly after key i needs a separator
    sep_matrix: bytes
    # exact output form (lower, Title or UPPER) -> source char, for decoding
    decode: dict[str, str]
    max_out: int
    decode_start: frozenset[str]
    # ASCII non-letters never need escaping or decoding
    ascii_fast: bool
    # flat lookup arrays for the compiled backend
    flat: _FlatTables = field(repr=False)
    # regex-backend helpers
    escape_re: re.Pattern = field(repr=False)
    sep_re: re.Pattern | None = field(repr=False)
    upper_run_re: re.Pattern = field(repr=False)
    upper_table: dict[int, str] = field(repr=False)
    single_table: dict[int, str] = field(repr=False)
    run_re: regex.Pattern = field(repr=False)
    multi_re: re.Pattern | None = field(repr=False)
    multi_table: dict[str, str] = field(repr=False)
    decode_table: dict[int, str | None] = field(repr=False)


# character class bits in _FlatTables.cls
ESCAPE, COVERED, UPPER, DECODE_START = 1, 2, 4, 8


@dataclass(frozen=True)
class _FlatTables:
    cls: bytes  # 0x10000 class bytes for the BMP
    astral_escape: frozenset[int]
    key_of: array  # 'H', 0x10000 entries, key index of covered chars
    bucket: array  # 'H', 0x10000 entries, 1 + offset into cand, 0 = none
    cand: array  # 'H', form indices per bucket (longest first), 0xFFFF ends a bucket
    form_buf: array  # 'I', code points of all forms
    form_off: array  # 'I'
    form_len: array  # 'H'
    form_src: array  # 'I', decoded code point per form
    # romanize outputs: index 3*k + {0: lower, 1: title, 2: upper}
    out_buf: array  # 'I'
    out_off: array  # 'I'
    out_len: array  # 'H'


def _flatten(
    escape: frozenset[str],
    index: dict[str, int],
    is_upper: frozenset[str],
    decode: dict[str, str],
    outs: tuple[str, ...],
) -> _FlatTables:
    cls = bytearray(0x10000)
    astral = set()
    for c in escape:
        o = ord(c)
        if o < 0x10000:
            cls[o] |= ESCAPE
        else:
            astral.add(o)
    key_of = array("H", bytes(2 * 0x10000))
    for c, k in index.items():
        cls[ord(c)] |= COVERED | (UPPER if c in is_upper else 0)
        key_of[ord(c)] = k
    forms = sorted(decode, key=lambda f: (f[0], -len(f), f))
    form_buf, form_off, form_len = array("I"), array("I"), array("H")
    for f in forms:
        form_off.append(len(form_buf))
        form_len.append(len(f))
        form_buf.extend(ord(ch) for ch in f)
    bucket = array("H", bytes(2 * 0x10000))
    cand = array("H")
    astral_starts = {f[0] for f in forms if ord(f[0]) >= 0x10000}
    if astral_starts:
        raise TableError("decoded forms must start with a BMP character")
    out_buf, out_off, out_len = array("I"), array("I"), array("H")
    for o in outs:
        for form in (o, _title(o), o.upper()):
            out_off.append(len(out_buf))
            out_len.append(len(form))
            out_buf.extend(ord(ch) for ch in form)
    for first, group in itertools.groupby(range(len(forms)), key=lambda i: forms[i][0]):
        bucket[ord(first)] = len(cand) + 1
        cls[ord(first)] |= DECODE_START
        cand.extend(group)
        cand.append(0xFFFF)
    return _FlatTables(
        cls=bytes(cls),
        astral_escape=frozenset(astral),
        key_of=key_of,
        bucket=bucket,
        cand=cand,
        form_buf=form_buf,
        form_off=form_off,
        form_len=form_len,
        form_src=array("I", (ord(decode[f]) for f in forms)),
        out_buf=out_buf,
        out_off=out_off,
        out_len=out_len,
    )


class TranslitTable:
    """Cyrillic -> Latin mapping plus the reserved separator and delimiters.

    ``entries`` maps lowercase source letters to lowercase outputs. The
    uppercase form of a letter is covered only when its output has case;
    otherwise it is escaped like any foreign character.
    """

    def __init__(
        self,
        entries: Mapping[str, str],
        separator: str = SEPARATOR,
        latin_open: str = LATIN_OPEN,
        latin_close: str = LATIN_CLOSE,
    ):
        self.entries = dict(entries)
        self.separator = separator
        self.latin_open = latin_open
        self.latin_close = latin_close
        self._check_structure()
        self.plan = self._compile()
        self.prepared = _backend.kernels.prepare(self.plan)

    def __reduce__(self):
        return (type(self), (self.entries, self.separator, self.latin_open, self.latin_close))

    def __repr__(self) -> str:
        return f"TranslitTable({len(self.entries)} entries)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TranslitTable):
            return NotImplemented
        return (self.entries, self.separator, self.latin_open, self.latin_close) == (
            other.entries,
            other.separator,
            other.latin_open,
            other.latin_close,
        )

    def __hash__(self) -> int:
        return hash((tuple(self.entries.items()), self.separator, self.latin_open, self.latin_close))

    @property
    def digraph_outputs(self) -> frozenset[str]:
        return frozenset(o for o in self.entries.values() if len(o) > 1)

    def lookup(self, char: str) -> str:
        return self.entries[char]

    def _check_structure(self) -> None:
        reserved = {self.separator, self.latin_open, self.latin_close}
        if len(reserved) != 3 or any(len(r) != 1 for r in reserved):
            raise TableError("separator and delimiters must be three distinct single characters")
        cyrillic = _script_chars("Cyrillic")
        seen: dict[str, str] = {}
        for key, out in self.entries.items():
            if len(key) != 1 or key not in cyrillic or ord(key) >= 0x10000:
                raise TableError(f"key {key!r} is not a single Cyrillic BMP character")
            if key.lower() != key:
                raise TableError(f"key {key!r} must be lowercase")
            if not out or out != out.lower() or any(c.isspace() for c in out):
                raise TableError(f"output {out!r} for {key!r} must be non-empty lowercase without spaces")
            if reserved & set(out):
                raise TableError(f"output {out!r} for {key!r} contains a reserved character")
            if set(out) & set(self.entries):
                raise TableError(f"output {out!r} for {key!r} contains a source letter")
            for form in (out.upper(), _title(out)):
                if form.lower() != out:
                    raise TableError(f"output {out!r} for {key!r} does not survive case mapping")
            if out in seen:
                raise TableError(f"output {out!r} shared by {seen[out]!r} and {key!r}")
            seen[out] = key

    def _compile(self) -> _Plan:
        keys = tuple(self.entries)
        outs = tuple(self.entries[k] for k in keys)
        n = len(keys)
        index: dict[str, int] = {k: i for i, k in enumerate(keys)}
        upper_keys = []
        for i, (k, o) in enumerate(zip(keys, outs)):
            u = k.upper()
            # uppercase is representable only if the output carries case
            if len(u) == 1 and ord(u) < 0x10000 and u != k and u.lower() == k and _title(o) != o:
                index[u] = i
                upper_keys.append(u)
            else:
                upper_keys.append("")
        is_upper = frozenset(u for u in upper_keys if u)
        covered = frozenset(index)

        out_chars = {c for o in outs for c in o} | {c for o in outs for c in o.upper()}
        escape = (
            _script_chars("Latin")
            | (_script_chars("Cyrillic") - covered)
            | {self.separator, self.latin_open, self.latin_close}
            | out_chars
        )

        # Greedy longest-match decoding reads A+B wrongly when some longer
        # output begins with A and its remainder is prefix-compatible with B.
        sep_matrix = bytearray(n * n)
        for i, a in enumerate(outs):
            longer = [o[len(a):] for o in outs if len(o) > len(a) and o.startswith(a)]
            if not longer:
                continue
            for j, b in enumerate(outs):
                if any(b.startswith(rest) or rest.startswith(b) for rest in longer):
                    sep_matrix[i * n + j] = 1

        decode: dict[str, str] = {}
        for i in range(n):
            decode[outs[i]] = keys[i]
            if upper_keys[i]:
                decode[_title(outs[i])] = upper_keys[i]
                decode[outs[i].upper()] = upper_keys[i]
        max_out = max((len(o) for o in outs), default=1)
        decode_start = frozenset(form[0] for form in decode)
        ascii_fast = not any(
            ord(c) < 0x80 and not c.isalpha() for c in escape | decode_start
        )

        escape_re = re.compile(f"[{_char_class(escape)}]+")
        alts = []
        for i in range(n):
            followers = [c for j in range(n) if sep_matrix[i * n + j] for c in (keys[j], upper_keys[j]) if c]
            if followers:
                firsts = [c for c in (keys[i], upper_keys[i]) if c]
                alts.append(f"(?<=[{_char_class(firsts)}])(?=[{_char_class(followers)}])")
        sep_re = re.compile("|".join(alts)) if alts else None
        upper_cls = _char_class(is_upper) if is_upper else None
        upper_run_re = re.compile(
            f"[{upper_cls}](?:{re.escape(self.separator)}?[{upper_cls}])+" if upper_cls else "(?!)"
        )
        upper_table = {ord(u): outs[i].upper() for i, u in enumerate(upper_keys) if u}
        single_table = {ord(k): outs[i] for i, k in enumerate(keys)}
        single_table.update({ord(u): _title(outs[i]) for i, u in enumerate(upper_keys) if u})

        o_, c_ = regex.escape(self.latin_open), regex.escape(self.latin_close)
        run_re = regex.compile(f"{o_}((?:[^{c_}]|{c_}{c_})*+){c_}")
        multi = sorted((f for f in decode if len(f) > 1), key=lambda f: (-len(f), f))
        multi_re = re.compile("|".join(re.escape(f) for f in multi)) if multi else None
        multi_table = {f: src for f, src in decode.items() if len(f) > 1}
        decode_table: dict[int, str | None] = {ord(f): src for f, src in decode.items() if len(f) == 1}
        decode_table[ord(self.separator)] = None

        return _Plan(
            sep=self.separator,
            open=self.latin_open,
            close=self.latin_close,
            escape=escape,
            index=index,
            keys=keys,
            upper_keys=tuple(upper_keys),
            lower_out=outs,
            title_out=tuple(_title(o) for o in outs),
            upper_out=tuple(o.upper() for o in outs),
            is_upper=is_upper,
            sep_matrix=bytes(sep_matrix),
            decode=decode,
            max_out=max_out,
            decode_start=decode_start,
            ascii_fast=ascii_fast,
            flat=_flatten(escape, index, is_upper, decode, outs),
            escape_re=escape_re,
            sep_re=sep_re,
            upper_run_re=upper_run_re,
            upper_table=upper_table,
            single_table=single_table,
            run_re=run_re,
            multi_re=multi_re,
            multi_table=multi_table,
            decode_table=decode_table,
        )

    def validate(self) -> None:
        """Round-trip every covered letter and every ordered pair of them.

        Raises :class:`TableError` on the first failure.
        """
        letters = sorted(self.plan.index)
        for a in letters:
            for b in [""] + letters:
                s = a + b
                back = deromanize(romanize(s, self), self)
                if back != s:
                    raise TableError(f"{s!r} round-trips to {back!r}")

    @classmethod
    def from_file(cls, path: str | PathLike[str], base: TranslitTable | None = None) -> TranslitTable:
        """Load ``<cyrillic>\\t<latin>`` overrides on top of ``base`` (default Czech).

        The loaded table is validated before it is returned.
        """
        entries = dict((base or default_czech_table()).entries)
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise TableError(f"{path}:{lineno}: expected '<cyrillic>\\t<latin>'")
                entries[parts[0]] = parts[1]
        table = cls(entries)
        table.validate()
        return table

    def write(self, path: str | PathLike[str]) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# cyrillic\tlatin\n")
            for k, v in self.entries.items():
                fh.write(f"{k}\t{v}\n")


@functools.lru_cache(maxsize=None)
def default_czech_table() -> TranslitTable:
    return TranslitTable(CZECH_ENTRIES)


def table_for(mode: RomanizationMode) -> TranslitTable:
    if mode is RomanizationMode.CZECH:
        return default_czech_table()
    raise ValueError(f"no table for {mode}")  # pragma: no cover


def romanize(line: str, table: TranslitTable | None = None) -> str:
    return _backend.kernels.romanize(line, (table or default_czech_table()).prepared)


def deromanize(line: str, table: TranslitTable | None = None) -> str:
    """Invert :func:`romanize`; raises :class:`UnbalancedDelimiter` on a cut-off run."""
    text, bad = _backend.kernels.deromanize(line, (table or default_czech_table()).prepared)
    if bad >= 0:
        raise UnbalancedDelimiter(bad)
    return text
