"""Rule-based cleaning of Czech-Ukrainian bitext and of monolingual text.

A pair goes through four steps and the first failing one names the reason:
printability, language identification, character length ratio, then the
regular-expression rules and the bilingual lexicon. Corpora listed in
``FilterConfig.exempt_corpora`` skip language identification and the ratio.
"""

from __future__ import annotations

import configparser
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from os import PathLike
from typing import Callable, Iterable, Iterator, NamedTuple

import regex

from ._parallel import ordered_map
from .langid import Indeterminate
from .textmodel import decode_bytes, sanitize

__all__ = [
    "PairRecord",
    "FilterConfig",
    "Rule",
    "Lexicon",
    "RuleSet",
    "FilterDecision",
    "KEPT",
    "FilterStats",
    "STEP_REASONS",
    "length_ratio_ok",
    "check_rules",
    "filter_pair",
    "filter_mono",
    "parse_bitext",
    "run_pipeline",
    "RecordFault",
    "default_rules",
]

Detector = Callable[[str], "tuple[str, float]"]

PRINTABILITY = "printability"
FORMAT = "format"
LANGID_SRC = "langid-src"
LANGID_TGT = "langid-tgt"
LENGTH_RATIO = "length-ratio"
MONO_MAXLEN = "mono-maxlen"
EMPTY = "empty"
LEXICON = "municipality-lexicon"
STEP_REASONS = frozenset({PRINTABILITY, FORMAT, LANGID_SRC, LANGID_TGT, LENGTH_RATIO, MONO_MAXLEN, EMPTY})


class PairRecord(NamedTuple):
    src: str
    tgt: str
    corpus_tag: str = ""


@dataclass(frozen=True)
class FilterConfig:
    ratio_min: float = 0.67
    ratio_max: float = 1.5
    ratio_min_length_chars: int = 10
    mono_max_chars_uk: int = 300
    mono_max_chars_cs: int = 1400
    exempt_corpora: frozenset[str] = frozenset({"XLEnt"})
    langid_threshold: float = 0.1
    src_lang: str = "cs"
    tgt_lang: str = "uk"
    langid: bool = True
    ratio: bool = True
    rules: bool = True

    def __post_init__(self):
        object.__setattr__(self, "exempt_corpora", frozenset(self.exempt_corpora))
        if not 0 < self.ratio_min <= 1 <= self.ratio_max:
            raise ValueError("need 0 < ratio_min <= 1 <= ratio_max")
        if min(self.ratio_min_length_chars, self.mono_max_chars_uk, self.mono_max_chars_cs) <= 0:
            raise ValueError("length limits must be positive")
        if not 0.0 <= self.langid_threshold <= 1.0:
            raise ValueError("langid_threshold must be in [0, 1]")

    @property
    def ratio_bounds(self) -> tuple[Fraction, Fraction]:
        # exact decimal values, so 0.67 means 67/100 and not the nearest double
        return Fraction(str(self.ratio_min)), Fraction(str(self.ratio_max))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exempt_corpora"] = sorted(self.exempt_corpora)
        return d


class FilterDecision(NamedTuple):
    reason: str | None = None

    @property
    def kept(self) -> bool:
        return self.reason is None

    def __repr__(self) -> str:
        return "Kept" if self.reason is None else f"Rejected({self.reason!r})"


KEPT = FilterDecision()


# -- rules -------------------------------------------------------------------

SIDES = ("src", "tgt", "both", "asymmetric")
ACTIONS = {
    "reject-if-either-matches": "either",
    "reject-if-exactly-one-matches": "exactly-one",
}


@dataclass(frozen=True)
class Rule:
    name: str
    side: str
    action: str  # "either" or "exactly-one"
    pattern_src: str | None = None
    pattern_tgt: str | None = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"rule {self.name}: side must be one of {SIDES}")
        if self.action not in ACTIONS.values():
            raise ValueError(f"rule {self.name}: unknown action {self.action!r}")
        if self.side in ("src", "both", "asymmetric") and self.pattern_src is None:
            raise ValueError(f"rule {self.name}: missing source pattern")
        if self.side in ("tgt", "asymmetric") and self.pattern_tgt is None:
            raise ValueError(f"rule {self.name}: missing target pattern")
        if self.side in ("src", "tgt") and self.action == "exactly-one":
            raise ValueError(f"rule {self.name}: a one-sided rule cannot compare sides")
        for p in (self.pattern_src, self.pattern_tgt):
            if p is not None:
                try:
                    regex.compile(p)
                except regex.error as e:
                    raise ValueError(f"rule {self.name}: bad pattern {p!r}: {e}") from None

    def rejects(self, src: str, tgt: str) -> bool:
        src_re, tgt_re = _rule_patterns(self)
        hit_src = src_re is not None and src_re.search(src) is not None
        hit_tgt = tgt_re is not None and tgt_re.search(tgt) is not None
        if self.action == "either":
            return hit_src or hit_tgt
        return hit_src != hit_tgt


def _rule_patterns(rule: Rule) -> tuple[regex.Pattern | None, regex.Pattern | None]:
    # regex caches compiled patterns itself
    if rule.side == "src":
        return regex.compile(rule.pattern_src), None
    if rule.side == "tgt":
        return None, regex.compile(rule.pattern_tgt)
    if rule.side == "both":
        p = regex.compile(rule.pattern_src)
        return p, p
    return regex.compile(rule.pattern_src), regex.compile(rule.pattern_tgt)


class _FormMatcher:
    """Finds which of many case-folded forms occur as substrings of a text."""

    def __init__(self, forms: Iterable[str]):
        forms = sorted(set(forms), key=lambda f: (-len(f), f))
        self.contained = {f: frozenset(g for g in forms if g in f) for f in forms}
        self.pattern = regex.compile("|".join(map(regex.escape, forms))) if forms else None

    def found(self, text: str) -> set[str]:
        if self.pattern is None:
            return set()
        # at each start position the longest form wins; shorter forms hidden
        # inside it are recovered through ``contained``
        out: set[str] = set()
        for m in self.pattern.findall(text, overlapped=True):
            out |= self.contained[m]
        return out


@dataclass(frozen=True)
class Lexicon:
    """Pairs of (Czech forms, Ukrainian forms) that must be translated together.

    The first form on each side is the base term; the rest are accepted
    inflections. All forms are stored case-folded.
    """

    entries: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = ()
    name: str = LEXICON

    def __post_init__(self):
        for cs, uk in self.entries:
            if not cs or not uk or not all(cs) or not all(uk):
                raise ValueError(f"lexicon entry {cs!r}/{uk!r} has an empty form")

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: str | PathLike[str], name: str = LEXICON) -> Lexicon:
        """Read ``cs<TAB>uk[<TAB>cs_alt,...[<TAB>uk_alt,...]]`` lines."""
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read(), name=name, origin=str(path))

    @classmethod
    def parse(cls, text: str, name: str = LEXICON, origin: str = "<lexicon>") -> Lexicon:
        entries = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2 or len(cols) > 4:
                raise ValueError(f"{origin}:{lineno}: expected 2 to 4 tab-separated columns")
            cs_alt = cols[2].split(",") if len(cols) > 2 and cols[2] else []
            uk_alt = cols[3].split(",") if len(cols) > 3 and cols[3] else []
            cs = tuple(_dedupe(f.strip().casefold() for f in [cols[0], *cs_alt]))
            uk = tuple(_dedupe(f.strip().casefold() for f in [cols[1], *uk_alt]))
            entries.append((cs, uk))
        return cls(tuple(entries), name)

    @property
    def _matchers(self) -> tuple[_FormMatcher, _FormMatcher]:
        cached = self.__dict__.get("_m")
        if cached is None:
            cached = (
                _FormMatcher(f for cs, _ in self.entries for f in cs),
                _FormMatcher(f for _, uk in self.entries for f in uk),
            )
            object.__setattr__(self, "_m", cached)
        return cached

    def violations(self, src: str, tgt: str) -> list[int]:
        """Indices of entries present on exactly one side of the pair."""
        cs_m, uk_m = self._matchers
        cs_found = cs_m.found(src.casefold())
        uk_found = uk_m.found(tgt.casefold())
        bad = []
        for i, (cs, uk) in enumerate(self.entries):
            if any(f in cs_found for f in cs) != any(f in uk_found for f in uk):
                bad.append(i)
        return bad

    def rejects(self, src: str, tgt: str) -> bool:
        return bool(self.violations(src, tgt))

    def __getstate__(self):
        return {"entries": self.entries, "name": self.name}

    def __setstate__(self, state):
        object.__setattr__(self, "entries", state["entries"])
        object.__setattr__(self, "name", state["name"])


def _dedupe(items: Iterable[str]) -> list[str]:
    return list(dict.fromkeys(i for i in items if i))


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()
    lexicon: Lexicon | None = None

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if self.lexicon is not None:
            names.append(self.lexicon.name)
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate rule names: {sorted(dupes)}")
        clash = set(names) & STEP_REASONS
        if clash:
            raise ValueError(f"rule names clash with step names: {sorted(clash)}")

    @property
    def reasons(self) -> tuple[str, ...]:
        names = tuple(r.name for r in self.rules)
        return names + ((self.lexicon.name,) if self.lexicon is not None else ())

    @classmethod
    def parse_rules(cls, text: str, origin: str = "<rules>") -> tuple[Rule, ...]:
        """Rules from INI text: one section per rule, in file order."""
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read_string(text, source=origin)
        except configparser.Error as e:
            raise ValueError(str(e)) from None
        known = {"side", "pattern", "pattern_src", "pattern_tgt", "action"}
        rules = []
        for name in cp.sections():
            sec = cp[name]
            extra = set(sec) - known
            if extra:
                raise ValueError(f"{origin}: rule {name}: unknown keys {sorted(extra)}")
            side = sec.get("side", "both")
            action = ACTIONS.get(sec.get("action", ""))
            if action is None:
                raise ValueError(f"{origin}: rule {name}: action must be one of {sorted(ACTIONS)}")
            pattern = sec.get("pattern")
            if side == "tgt":
                p_src, p_tgt = None, sec.get("pattern_tgt", pattern)
            elif side == "asymmetric":
                p_src, p_tgt = sec.get("pattern_src"), sec.get("pattern_tgt")
            else:
                p_src, p_tgt = sec.get("pattern_src", pattern), None
            rules.append(Rule(name, side, action, p_src, p_tgt))
        return tuple(rules)

    @classmethod
    def load(
        cls,
        rules_path: str | PathLike[str] | None = None,
        lexicon_path: str | PathLike[str] | None = None,
    ) -> RuleSet:
        rules: tuple[Rule, ...] = ()
        if rules_path is not None:
            with open(rules_path, encoding="utf-8") as fh:
                rules = cls.parse_rules(fh.read(), origin=str(rules_path))
        lexicon = Lexicon.load(lexicon_path) if lexicon_path is not None else None
        return cls(rules, lexicon)


def default_rules() -> RuleSet:
    """Bundled e-mail/URL/currency rules and the sample municipality lexicon."""
    data = resources.files("ukcs_prep").joinpath("data")
    rules = RuleSet.parse_rules(data.joinpath("rules.ini").read_text(encoding="utf-8"), origin="rules.ini")
    lexicon = Lexicon.parse(data.joinpath("municipalities.tsv").read_text(encoding="utf-8"), origin="municipalities.tsv")
    return RuleSet(rules, lexicon)


# -- decisions ---------------------------------------------------------------


def length_ratio_ok(src: str, tgt: str, cfg: FilterConfig) -> bool:
    """Character length ratio test; pairs with a side of at most
    ``ratio_min_length_chars`` characters are exempt. Bounds are inclusive."""
    ls, lt = len(src), len(tgt)
    if min(ls, lt) <= cfg.ratio_min_length_chars:
        return True
    lo, hi = cfg.ratio_bounds
    r = Fraction(ls, lt)
    return lo <= r <= hi


def check_rules(pair: PairRecord, rules: RuleSet) -> FilterDecision:
    for rule in rules.rules:
        if rule.rejects(pair.src, pair.tgt):
            return FilterDecision(rule.name)
    if rules.lexicon is not None and rules.lexicon.rejects(pair.src, pair.tgt):
        return FilterDecision(rules.lexicon.name)
    return KEPT


def _printable(text: str) -> bool:
    return bool(text) and not text.isspace() and not sanitize(text)[1]


def _lang_ok(line: str, want: str, detector: Detector, threshold: float) -> bool:
    try:
        lang, conf = detector(line)
    except Indeterminate:
        return False
    return lang == want and conf >= threshold


def filter_pair(
    pair: PairRecord,
    cfg: FilterConfig,
    detector: Detector | None = None,
    rules: RuleSet | None = None,
) -> FilterDecision:
    """Run the cleaning steps in order; the first failure is the reason.

    Language identification runs only when ``detector`` is given and
    ``cfg.langid`` is on; rules only when ``rules`` is given.
    """
    if not (_printable(pair.src) and _printable(pair.tgt)):
        return FilterDecision(PRINTABILITY)
    exempt = pair.corpus_tag in cfg.exempt_corpora
    if not exempt:
        if cfg.langid and detector is not None:
            if not _lang_ok(pair.src, cfg.src_lang, detector, cfg.langid_threshold):
                return FilterDecision(LANGID_SRC)
            if not _lang_ok(pair.tgt, cfg.tgt_lang, detector, cfg.langid_threshold):
                return FilterDecision(LANGID_TGT)
        if cfg.ratio and not length_ratio_ok(pair.src, pair.tgt, cfg):
            return FilterDecision(LENGTH_RATIO)
    if cfg.rules and rules is not None:
        return check_rules(pair, rules)
    return KEPT


def filter_mono(line: str, lang: str, cfg: FilterConfig) -> FilterDecision:
    if not line or line.isspace():
        return FilterDecision(EMPTY)
    if sanitize(line)[1]:
        return FilterDecision(PRINTABILITY)
    if lang == "uk":
        ok = len(line) < cfg.mono_max_chars_uk
    elif lang == "cs":
        ok = len(line) <= cfg.mono_max_chars_cs
    else:
        raise ValueError(f"no length limit for language {lang!r}")
    return KEPT if ok else FilterDecision(MONO_MAXLEN)


def parse_bitext(raw: bytes, corpus_tag: str = "") -> PairRecord | FilterDecision:
    """One ``src<TAB>tgt`` record from raw bytes, cleaned at ingestion.

    Returns a rejection when a side is empty after cleaning and a ``format``
    rejection when the record does not have exactly two fields.
    """
    raw = raw.rstrip(b"\r\n")
    fields = raw.split(b"\t")
    if len(fields) != 2:
        return FilterDecision(FORMAT)
    sides = []
    for f in fields:
        got = decode_bytes(f)
        if got is None:
            return FilterDecision(PRINTABILITY)
        sides.append(got[0])
    return PairRecord(sides[0], sides[1], corpus_tag)


# -- pipeline ----------------------------------------------------------------


@dataclass
class FilterStats:
    total: int = 0
    kept: int = 0
    rejected: Counter = field(default_factory=Counter)
    by_corpus: dict = field(default_factory=dict)

    def add(self, decision: FilterDecision, corpus_tag: str = "") -> None:
        self.total += 1
        c = self.by_corpus.setdefault(corpus_tag, {"total": 0, "kept": 0})
        c["total"] += 1
        if decision.reason is None:
            self.kept += 1
            c["kept"] += 1
        else:
            self.rejected[decision.reason] += 1

    def merge(self, other: FilterStats) -> FilterStats:
        out = FilterStats(self.total + other.total, self.kept + other.kept, self.rejected + other.rejected)
        for src in (self.by_corpus, other.by_corpus):
            for tag, c in src.items():
                d = out.by_corpus.setdefault(tag, {"total": 0, "kept": 0})
                d["total"] += c["total"]
                d["kept"] += c["kept"]
        return out

    @property
    def balanced(self) -> bool:
        return self.kept + sum(self.rejected.values()) == self.total

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "rejected": dict(sorted(self.rejected.items())),
            "by_corpus": {k: dict(v) for k, v in sorted(self.by_corpus.items())},
        }


class RecordFault(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"record {index + 1}: {reason}")
        self.index = index
        self.reason = reason


class _Job(NamedTuple):
    cfg: FilterConfig
    detector: Detector | None
    rules: RuleSet | None
    corpus_tag: str

    def decide(self, item: PairRecord | bytes) -> tuple[FilterDecision, PairRecord | None]:
        pair = parse_bitext(item, self.corpus_tag) if isinstance(item, bytes) else item
        if isinstance(pair, FilterDecision):
            return pair, None
        return filter_pair(pair, self.cfg, self.detector, self.rules), pair

    def __call__(self, items: list) -> list:
        return [self.decide(x) for x in items]


def run_pipeline(
    records: Iterable[PairRecord | bytes],
    cfg: FilterConfig,
    detector: Detector | None = None,
    rules: RuleSet | None = None,
    *,
    workers: int = 1,
    chunk_size: int = 2000,
    corpus_tag: str = "",
    stats: FilterStats | None = None,
    faults: frozenset[str] = frozenset(),
) -> Iterator[PairRecord]:
    """Yield kept pairs in input order, counting every decision into ``stats``.

    ``records`` may hold :class:`PairRecord` values or raw bitext lines
    (bytes, tagged with ``corpus_tag``). With ``workers > 1`` chunks are
    decided in a process pool; output and stats do not depend on the number
    of workers. ``stats`` is complete once the iterator is exhausted.
    A rejection whose reason is in ``faults`` raises :class:`RecordFault`.
    """
    if stats is None:
        stats = FilterStats()
    job = _Job(cfg, detector, rules, corpus_tag)
    for decision, pair in ordered_map(job, records, workers, chunk_size):
        if decision.reason in faults:
            raise RecordFault(stats.total, decision.reason)
        stats.add(decision, pair.corpus_tag if pair is not None else corpus_tag)
        if decision.reason is None:
            yield pair
