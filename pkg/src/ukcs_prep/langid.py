"""Character n-gram language identification (Cavnar & Trenkle rank profiles).

Candidates are first narrowed by the line's dominant script, so a Cyrillic
line can only be labelled with a Cyrillic-script language and vice versa.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from operator import itemgetter
from os import PathLike
from typing import Iterable, Mapping

import regex

from . import _backend
from .textmodel import ScriptClass, script_letter_counts

__all__ = [
    "EmptySample",
    "Indeterminate",
    "LangProfile",
    "LangIdModel",
    "text_ngrams",
    "ranked_ngrams",
    "train_langid",
    "SampleCounts",
    "count_sample",
    "model_from_counts",
    "detect",
    "default_model",
    "DEFAULT_K",
]

DEFAULT_K = 3000
MODEL_MAGIC = "#ukcs-langid"
MODEL_VERSION = 1

_WORD_RE = regex.compile(r"[\p{L}\p{M}]+")
_LATIN_RUN_RE = regex.compile(r"[\p{L}&&\p{Script=Latin}]+", flags=regex.V1)
_CYRILLIC_RUN_RE = regex.compile(r"[\p{L}&&\p{Script=Cyrillic}]+", flags=regex.V1)


class EmptySample(ValueError):
    pass


class Indeterminate(ValueError):
    pass


@dataclass(frozen=True)
class LangProfile:
    lang: str
    ngrams: tuple[str, ...]  # rank order
    script: ScriptClass

    @functools.cached_property
    def ranks(self) -> dict[str, int]:
        return {g: r for r, g in enumerate(self.ngrams)}


def text_ngrams(text: str) -> dict[str, int]:
    """Counts of word-padded 1..3-grams over the letters of ``text``."""
    counts: dict[str, int] = {}
    _backend.kernels.ngram_counts(_WORD_RE.findall(text.lower()), counts)
    return counts


def ranked_ngrams(counts: Mapping[str, int], k: int) -> tuple[str, ...]:
    """Top ``k`` n-grams by count, ties broken lexicographically."""
    items = sorted(counts.items())
    items.sort(key=itemgetter(1), reverse=True)  # stable, so ties stay lexicographic
    return tuple(g for g, _ in items[:k])


def dominant_script(text: str) -> ScriptClass:
    latin, cyrillic = script_letter_counts(text)
    if latin == cyrillic:
        return ScriptClass.MIXED if latin else ScriptClass.OTHER
    return ScriptClass.LATIN if latin > cyrillic else ScriptClass.CYRILLIC


@dataclass(frozen=True)
class LangIdModel:
    profiles: tuple[LangProfile, ...]
    k: int = DEFAULT_K

    def __post_init__(self):
        if len(self.profiles) < 2:
            raise ValueError("a model needs at least two languages")
        langs = [p.lang for p in self.profiles]
        if len(set(langs)) != len(langs):
            raise ValueError(f"duplicate languages in {langs}")

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(p.lang for p in self.profiles)

    @functools.cached_property
    def script_prior(self) -> dict[ScriptClass, tuple[LangProfile, ...]]:
        by_script = {
            s: tuple(p for p in self.profiles if p.script is s)
            for s in (ScriptClass.LATIN, ScriptClass.CYRILLIC)
        }
        everything = self.profiles
        by_script[ScriptClass.MIXED] = everything
        by_script[ScriptClass.OTHER] = everything
        return by_script

    def save(self, path: str | PathLike[str]) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    def dumps(self) -> str:
        lines = [f"{MODEL_MAGIC} v{MODEL_VERSION}", f"k\t{self.k}"]
        lines.append("languages\t" + " ".join(self.languages))
        for p in self.profiles:
            lines.append(f"@lang\t{p.lang}\t{p.script.value}\t{len(p.ngrams)}")
            lines.extend(p.ngrams)
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, path: str | PathLike[str]) -> LangIdModel:
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    @classmethod
    def loads(cls, text: str) -> LangIdModel:
        lines = text.split("\n")
        head = lines[0].split()
        if len(head) != 2 or head[0] != MODEL_MAGIC or head[1] != f"v{MODEL_VERSION}":
            raise ValueError(f"not a v{MODEL_VERSION} language model: {lines[0]!r}")
        k = int(lines[1].split("\t")[1])
        profiles = []
        i = 3
        while i < len(lines) and lines[i]:
            tag, lang, script, count = lines[i].split("\t")
            if tag != "@lang":
                raise ValueError(f"line {i + 1}: expected @lang header")
            n = int(count)
            profiles.append(LangProfile(lang, tuple(lines[i + 1 : i + 1 + n]), ScriptClass(script)))
            i += 1 + n
        return cls(tuple(profiles), k)


@dataclass
class SampleCounts:
    """N-gram and script letter counts of a sample; shards merge by addition."""

    ngrams: dict[str, int] = field(default_factory=dict)
    latin: int = 0
    cyrillic: int = 0

    def merge(self, other: SampleCounts) -> SampleCounts:
        ngrams = dict(self.ngrams)
        for g, c in other.ngrams.items():
            ngrams[g] = ngrams.get(g, 0) + c
        return SampleCounts(ngrams, self.latin + other.latin, self.cyrillic + other.cyrillic)


def count_sample(lines: Iterable[str]) -> SampleCounts:
    out = SampleCounts()
    for line in lines:
        _backend.kernels.ngram_counts(_WORD_RE.findall(line.lower()), out.ngrams)
        la, cy = script_letter_counts(line)
        out.latin += la
        out.cyrillic += cy
    return out


def model_from_counts(samples: Mapping[str, SampleCounts], k: int = DEFAULT_K) -> LangIdModel:
    profiles = []
    for lang, sample in samples.items():
        if not sample.ngrams:
            raise EmptySample(f"no usable text for language {lang!r}")
        if sample.latin == sample.cyrillic:
            script = ScriptClass.OTHER
        else:
            script = ScriptClass.LATIN if sample.latin > sample.cyrillic else ScriptClass.CYRILLIC
        profiles.append(LangProfile(lang, ranked_ngrams(sample.ngrams, k), script))
    return LangIdModel(tuple(profiles), k)


def train_langid(samples: Mapping[str, Iterable[str]], k: int = DEFAULT_K) -> LangIdModel:
    """Rank profiles of the top ``k`` word-padded 1..3-grams per language."""
    if k < 1:
        raise ValueError("k must be positive")
    return model_from_counts({lang: count_sample(lines) for lang, lines in samples.items()}, k)


def detect(line: str, model: LangIdModel) -> tuple[str, float]:
    """Return ``(language, confidence)``; raises :class:`Indeterminate` without letters.

    Confidence is the relative margin ``(d2 - d1) / d2`` between the best and
    the runner-up out-of-place distance, and 1.0 for a single candidate.
    """
    lowered = line.lower()
    latin_runs = _LATIN_RUN_RE.findall(lowered)
    cyrillic_runs = _CYRILLIC_RUN_RE.findall(lowered)
    latin, cyrillic = sum(map(len, latin_runs)), sum(map(len, cyrillic_runs))
    if latin == cyrillic:
        script = ScriptClass.MIXED if latin else ScriptClass.OTHER
        words = _WORD_RE.findall(lowered)
    else:
        # only the dominant script counts; e-mails or brand names in the
        # other script would just add equal penalties to every candidate
        script = ScriptClass.LATIN if latin > cyrillic else ScriptClass.CYRILLIC
        words = latin_runs if latin > cyrillic else cyrillic_runs
    if not words:
        raise Indeterminate(f"no letters in {line!r}")
    candidates = model.script_prior[script]
    if not candidates:
        raise Indeterminate(f"no candidate language for script of {line!r}")
    if len(candidates) == 1:
        return candidates[0].lang, 1.0
    counts: dict[str, int] = {}
    _backend.kernels.ngram_counts(words, counts)
    doc = list(ranked_ngrams(counts, model.k))
    oop = _backend.kernels.out_of_place
    scored = sorted((oop(doc, p.ranks, model.k), i, p.lang) for i, p in enumerate(candidates))
    (d1, _, best), (d2, _, _) = scored[0], scored[1]
    confidence = (d2 - d1) / d2 if d2 else 0.0
    return best, confidence


@functools.lru_cache(maxsize=None)
def default_model() -> LangIdModel:
    """Bundled cs/uk/ru model."""
    text = resources.files("ukcs_prep").joinpath("data/langid-cs-uk-ru.txt").read_text(encoding="utf-8")
    return LangIdModel.loads(text)
