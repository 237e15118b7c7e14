"""Inline casing: lowercase text with casing tags, reversible given a vocabulary.

Each lowercased word may have a most frequent casing variant (``iphone`` ->
``iPhone``). Words in that variant are written as plain lowercase; other
regular casings get a tag token in front of the lowercased word.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping

from .textmodel import CasingPattern, Token, TokenizedText, classify_casing, detokenize, is_upper_char, tokenize

__all__ = [
    "TITLE",
    "UPPER",
    "LOWER",
    "ESC",
    "TAGS",
    "DanglingTag",
    "CasingVocabulary",
    "count_variants",
    "vocab_from_counts",
    "train_vocab",
    "encode",
    "decode",
    "count_tags",
    "count_marks",
]

TITLE = "<titlecase>"
UPPER = "<all-uppercase>"
LOWER = "<all-lowercase>"
ESC = "<inca-esc>"
TAGS = frozenset({TITLE, UPPER, LOWER, ESC})

_TAG_OF = {CasingPattern.TITLE: TITLE, CasingPattern.UPPER: UPPER, CasingPattern.LOWER: LOWER}


class DanglingTag(ValueError):
    def __init__(self, tag: str):
        super().__init__(f"{tag} at end of line")
        self.tag = tag


@dataclass(frozen=True)
class CasingVocabulary:
    """Lowercased word -> (most frequent variant, its count).

    Words whose most frequent variant is plain lowercase are not stored.
    """

    entries: Mapping[str, tuple[str, int]] = field(default_factory=dict)
    min_count: int = 1
    source: str = ""

    def __post_init__(self):
        for key, (variant, count) in self.entries.items():
            if variant.lower() != key or variant == key:
                raise ValueError(f"bad vocabulary entry {key!r} -> {variant!r}")
            if count < self.min_count:
                raise ValueError(f"entry {variant!r} has count {count} < min_count {self.min_count}")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def variant(self, key: str) -> str:
        """Most frequent variant of lowercased ``key`` (``key`` itself if unknown)."""
        hit = self.entries.get(key)
        return key if hit is None else hit[0]

    @classmethod
    def from_variants(cls, variants: Iterable[str], min_count: int = 1) -> CasingVocabulary:
        """Vocabulary from a bare list of variants, each with count ``min_count``."""
        return cls({v.lower(): (v, min_count) for v in variants}, min_count=min_count)

    @classmethod
    def load(cls, path: str | PathLike[str]) -> CasingVocabulary:
        """Read ``<variant>\\t<count>`` lines; ``# key=value`` lines carry metadata."""
        entries = {}
        meta = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                # variants never contain spaces, so "# " cannot start an entry
                if line.startswith("# "):
                    key, _, value = line[2:].partition("=")
                    meta[key.strip()] = value.strip()
                    continue
                try:
                    variant, count = line.split("\t")
                    entries[variant.lower()] = (variant, int(count))
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: expected '<variant>\\t<count>'") from None
        return cls(entries, min_count=int(meta.get("min_count", 1)), source=meta.get("source", ""))

    def save(self, path: str | PathLike[str]) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# min_count={self.min_count}\n")
            if self.source:
                fh.write(f"# source={self.source}\n")
            for key in sorted(self.entries):
                variant, count = self.entries[key]
                fh.write(f"{variant}\t{count}\n")


def count_variants(lines: Iterable[str]) -> Counter[str]:
    """Count exact-cased tokens that contain at least one cased letter."""
    counts: Counter[str] = Counter()
    for line in lines:
        counts.update(line.split())
    for tok in [t for t in counts if classify_casing(t) is CasingPattern.NOCASE]:
        del counts[tok]
    return counts


def vocab_from_counts(counts: Mapping[str, int], min_count: int = 2, source: str = "") -> CasingVocabulary:
    """Pick each word's most frequent variant.

    Ties go to the all-lowercase form, then to the lexicographically smallest
    variant. Variants seen fewer than ``min_count`` times are not stored.
    """
    best: dict[str, tuple[str, int]] = {}
    for variant, count in counts.items():
        key = variant.lower()
        cur = best.get(key)
        if cur is None or _better(variant, count, cur[0], cur[1], key):
            best[key] = (variant, count)
    entries = {k: v for k, v in best.items() if v[0] != k and v[1] >= min_count}
    return CasingVocabulary(entries, min_count=min_count, source=source)


def _better(variant: str, count: int, other: str, other_count: int, key: str) -> bool:
    if count != other_count:
        return count > other_count
    if (variant == key) != (other == key):
        return variant == key
    return variant < other


def train_vocab(lines: Iterable[str], min_count: int = 2, source: str = "") -> CasingVocabulary:
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    return vocab_from_counts(count_variants(lines), min_count=min_count, source=source)


def _recase(lowered: str, pattern: CasingPattern) -> str:
    if pattern is CasingPattern.UPPER:
        return lowered.upper()
    if pattern is CasingPattern.TITLE:
        for i, c in enumerate(lowered):
            if c.upper() != c:
                return lowered[:i] + c.upper() + lowered[i + 1 :]
        return lowered
    return lowered


def _encode_token(body: str, vocab: CasingVocabulary) -> tuple[str | None, str]:
    """(tag or None, emitted body) for one token."""
    pattern = classify_casing(body)
    if pattern is CasingPattern.NOCASE:
        return None, body
    if body in TAGS:
        return ESC, body
    lowered = body.lower()
    if body == vocab.variant(lowered) and lowered not in TAGS:
        return None, lowered
    if pattern is CasingPattern.IRREGULAR:
        return None, body
    # characters like U+212A KELVIN SIGN do not survive lower+recase
    if _recase(lowered, pattern) != body:
        return None, body
    return _TAG_OF[pattern], lowered


def encode(line: str, vocab: CasingVocabulary) -> str:
    tt = tokenize(line)
    tokens = []
    for ws, body in tt.tokens:
        tag, out = _encode_token(body, vocab)
        if tag is None:
            tokens.append(Token(ws, out))
        else:
            tokens.append(Token(ws, tag))
            tokens.append(Token(" ", out))
    return detokenize(TokenizedText(tuple(tokens), tt.trailing))


def decode(line: str, vocab: CasingVocabulary) -> str:
    """Invert :func:`encode`; raises :class:`DanglingTag` for a trailing tag."""
    tt = tokenize(line)
    toks = tt.tokens
    out = []
    i = 0
    while i < len(toks):
        ws, body = toks[i]
        if body in TAGS:
            if i + 1 >= len(toks):
                raise DanglingTag(body)
            nxt = toks[i + 1].body
            if body == ESC:
                out.append(Token(ws, nxt))
            elif body == TITLE:
                out.append(Token(ws, _recase(nxt.lower(), CasingPattern.TITLE)))
            elif body == UPPER:
                out.append(Token(ws, nxt.upper()))
            else:
                out.append(Token(ws, nxt.lower()))
            i += 2
            continue
        out.append(Token(ws, _decode_plain(body, vocab)))
        i += 1
    return detokenize(TokenizedText(tuple(out), tt.trailing))


def _decode_plain(body: str, vocab: CasingVocabulary) -> str:
    if any(is_upper_char(c) for c in body):
        return body
    return vocab.variant(body)


def count_tags(line: str) -> int:
    """Number of casing tags in an encoded line (escapes excluded)."""
    toks = line.split()
    n = i = 0
    while i < len(toks):
        if toks[i] in TAGS:
            n += toks[i] != ESC
            i += 2  # the next token is data, even if it looks like a tag
        else:
            i += 1
    return n


def count_marks(line: str) -> int:
    """Casing tags plus verbatim Irregular tokens: every token whose casing is
    not recovered from the vocabulary."""
    toks = line.split()
    n = i = 0
    while i < len(toks):
        if toks[i] in TAGS:
            n += toks[i] != ESC
            i += 2
            continue
        n += classify_casing(toks[i]) is CasingPattern.IRREGULAR
        i += 1
    return n
