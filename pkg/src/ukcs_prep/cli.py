"""``ukcs-prep`` command line: one subcommand per toolkit operation.

Stream commands read UTF-8 lines from stdin or ``--input`` and write results
in input order. Exit status is 0 on success, 1 for usage or configuration
errors and 2 for a data fault in ``--strict`` mode (the default).
"""

from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from collections import Counter
from contextlib import ExitStack
from typing import BinaryIO, Callable, Iterable, Iterator

from . import __version__
from ._parallel import ordered_map
from .config import ConfigError, PipelineConfig, load_config
from .corpus_filter import FilterDecision, FilterStats, RecordFault, RuleSet, default_rules, filter_mono, run_pipeline
from .dce import DuplicateId, Ratio, ScoredPair, TopN, parse_score_line, select
from .inca import CasingVocabulary, DanglingTag, count_variants, decode, encode, vocab_from_counts
from .langid import DEFAULT_K, Indeterminate, LangIdModel, count_sample, default_model, detect, model_from_counts
from .noiser import line_seed, noise_line
from .romanizer import TableError, TranslitTable, UnbalancedDelimiter, default_czech_table, deromanize, romanize
from .textmodel import decode_bytes

log = logging.getLogger("ukcs_prep")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataFault(Exception):
    def __init__(self, index: int, message: str):
        super().__init__(f"record {index + 1}: {message}")
        self.index = index


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- line plumbing -----------------------------------------------------------


def _split_end(raw: bytes) -> tuple[bytes, bytes]:
    if raw.endswith(b"\n"):
        return raw[:-1], b"\n"
    return raw, b""


class _TextJob:
    """Applies ``fn(index, text)`` to ``(index, raw line)`` items.

    Lines are decoded with ``surrogateescape`` so undecodable bytes come back
    out unchanged. Exceptions of type ``faults`` become per-line faults.
    """

    def __init__(self, fn: Callable[[int, str], str], faults: tuple[type[Exception], ...] = ()):
        self.fn = fn
        self.faults = faults

    def __call__(self, items: list[tuple[int, bytes]]) -> list[tuple[bytes | None, str | None]]:
        out = []
        for index, raw in items:
            body, end = _split_end(raw)
            text = body.decode("utf-8", "surrogateescape")
            try:
                result = self.fn(index, text)
            except self.faults as e:
                out.append((None, str(e)))
                continue
            out.append((result.encode("utf-8", "surrogateescape") + end, None))
        return out


def _ignore_index(fn: Callable[[str], str], index: int, text: str) -> str:
    return fn(text)


def _noise_at(cfg, index: int, text: str) -> str:
    return noise_line(text, cfg, line_seed(cfg.global_seed, index))


def _stream(
    job: _TextJob,
    lines: Iterable[bytes],
    out: BinaryIO,
    cfg: PipelineConfig,
) -> dict:
    stats = {"lines": 0, "written": 0, "faults": 0}
    for index, (data, fault) in enumerate(ordered_map(job, enumerate(lines), cfg.workers)):
        stats["lines"] += 1
        if fault is not None:
            if cfg.strict:
                raise DataFault(index, fault)
            log.warning("skipping record %d: %s", index + 1, fault)
            stats["faults"] += 1
            continue
        out.write(data)
        stats["written"] += 1
    return stats


# -- commands ----------------------------------------------------------------


def _table(args, cfg: PipelineConfig) -> TranslitTable:
    path = args.table or cfg.table
    if path is None:
        return default_czech_table()
    try:
        return TranslitTable.from_file(path)
    except (OSError, TableError) as e:
        raise UsageError(f"bad transliteration table {path}: {e}") from None


def cmd_romanize(args, cfg, inp, out) -> dict:
    fn = functools.partial(romanize, table=_table(args, cfg))
    return _stream(_TextJob(functools.partial(_ignore_index, fn)), inp, out, cfg)


def cmd_deromanize(args, cfg, inp, out) -> dict:
    fn = functools.partial(deromanize, table=_table(args, cfg))
    return _stream(_TextJob(functools.partial(_ignore_index, fn), (UnbalancedDelimiter,)), inp, out, cfg)


def _vocab(args, cfg: PipelineConfig) -> CasingVocabulary:
    path = args.vocab or cfg.vocab
    if path is None:
        raise UsageError("a casing vocabulary is required (--vocab or [inca] vocab)")
    try:
        return CasingVocabulary.load(path)
    except (OSError, ValueError) as e:
        raise UsageError(f"bad casing vocabulary {path}: {e}") from None


def cmd_inca_encode(args, cfg, inp, out) -> dict:
    fn = functools.partial(encode, vocab=_vocab(args, cfg))
    return _stream(_TextJob(functools.partial(_ignore_index, fn)), inp, out, cfg)


def cmd_inca_decode(args, cfg, inp, out) -> dict:
    fn = functools.partial(decode, vocab=_vocab(args, cfg))
    return _stream(_TextJob(functools.partial(_ignore_index, fn), (DanglingTag,)), inp, out, cfg)


def _count_chunk(lines: list[bytes]) -> list[Counter]:
    return [count_variants(raw.decode("utf-8", "surrogateescape") for raw in lines)]


def cmd_inca_train(args, cfg, inp, out) -> dict:
    if args.min_count < 1:
        raise UsageError("--min-count must be at least 1")
    n = 0

    def lines() -> Iterator[bytes]:
        nonlocal n
        for raw in inp:
            n += 1
            yield raw
        for path in args.add or ():
            with open(path, "rb") as fh:
                for raw in fh:
                    n += 1
                    yield raw

    counts: Counter = Counter()
    for part in ordered_map(_count_chunk, lines(), cfg.workers, 10000):
        counts.update(part)
    vocab = vocab_from_counts(counts, min_count=args.min_count, source=args.source or "")
    vocab.save(args.vocab_out)
    return {"lines": n, "variants": len(counts), "vocab_size": len(vocab)}


def cmd_noise(args, cfg, inp, out) -> dict:
    job = _TextJob(functools.partial(_noise_at, cfg.noise))
    return _stream(job, inp, out, cfg)


def _rules(args, cfg: PipelineConfig) -> RuleSet | None:
    rules_path = args.rules or cfg.rules_file
    lexicon_path = args.lexicon or cfg.lexicon_file
    try:
        if rules_path is None and lexicon_path is None:
            return None if args.no_default_rules else default_rules()
        return RuleSet.load(rules_path, lexicon_path)
    except (OSError, ValueError) as e:
        raise UsageError(f"bad rules: {e}") from None


def _langid_model(args, cfg: PipelineConfig) -> LangIdModel:
    path = getattr(args, "model", None) or cfg.langid_model
    if path is None:
        return default_model()
    try:
        return LangIdModel.load(path)
    except (OSError, ValueError, IndexError) as e:
        raise UsageError(f"bad language model {path}: {e}") from None


def cmd_filter_parallel(args, cfg, inp, out) -> dict:
    rules = _rules(args, cfg)
    detector = functools.partial(detect, model=_langid_model(args, cfg)) if cfg.filter.langid else None
    stats = FilterStats()
    faults = frozenset({"format"}) if cfg.strict else frozenset()
    kept = run_pipeline(
        inp, cfg.filter, detector, rules, workers=cfg.workers, corpus_tag=args.corpus_tag, stats=stats, faults=faults
    )
    try:
        for pair in kept:
            out.write(f"{pair.src}\t{pair.tgt}\n".encode())
    except RecordFault as e:
        raise DataFault(e.index, e.reason) from None
    return stats.to_dict()


class _MonoJob:
    def __init__(self, lang: str, cfg):
        self.lang = lang
        self.cfg = cfg

    def __call__(self, lines: list[bytes]) -> list[tuple[FilterDecision, str | None]]:
        out = []
        for raw in lines:
            body, _ = _split_end(raw)
            got = decode_bytes(body)
            if got is None:
                reason = "empty" if not body.strip() else "printability"
                out.append((FilterDecision(reason), None))
                continue
            out.append((filter_mono(got[0], self.lang, self.cfg), got[0]))
        return out


def cmd_filter_mono(args, cfg, inp, out) -> dict:
    stats = FilterStats()
    for decision, line in ordered_map(_MonoJob(args.lang, cfg.filter), inp, cfg.workers):
        stats.add(decision, args.lang)
        if decision.kept:
            out.write(line.encode() + b"\n")
    return stats.to_dict()


def _count_lang_chunk(lines: list[str]) -> list:
    return [count_sample(lines)]


def cmd_langid_train(args, cfg, inp, out) -> dict:
    samples = {}
    for spec in args.lang:
        lang, sep, path = spec.partition("=")
        if not sep or not lang or not path:
            raise UsageError(f"--lang expects LANG=FILE, got {spec!r}")
        if lang in samples:
            raise UsageError(f"language {lang!r} given twice")
        samples[lang] = path
    if len(samples) < 2:
        raise UsageError("at least two --lang samples are needed")
    per_lang = {}
    for lang, path in samples.items():
        with open(path, encoding="utf-8", errors="surrogateescape") as fh:
            parts = ordered_map(_count_lang_chunk, (ln.rstrip("\n") for ln in fh), cfg.workers, 10000)
            per_lang[lang] = functools.reduce(lambda a, b: a.merge(b), parts, count_sample([]))
    try:
        model = model_from_counts(per_lang, args.k)
    except ValueError as e:
        raise DataFault(0, str(e)) from None
    model.save(args.model_out)
    return {"languages": list(model.languages), "k": model.k}


class _LangIdJob:
    def __init__(self, model: LangIdModel, keep: str | None, threshold: float):
        self.model = model
        self.keep = keep
        self.threshold = threshold

    def __call__(self, lines: list[bytes]) -> list[tuple[bytes | None, str]]:
        out = []
        for raw in lines:
            body, end = _split_end(raw)
            text = body.decode("utf-8", "surrogateescape")
            try:
                lang, conf = detect(text, self.model)
            except Indeterminate:
                lang, conf = "und", 0.0
            if self.keep is None:
                out.append((f"{lang}\t{conf:.4f}\t".encode() + body + b"\n", lang))
            elif lang == self.keep and conf >= self.threshold:
                out.append((body + b"\n", lang))
            else:
                out.append((None, lang))
        return out


def cmd_langid(args, cfg, inp, out) -> dict:
    threshold = cfg.filter.langid_threshold if args.threshold is None else args.threshold
    job = _LangIdJob(_langid_model(args, cfg), args.keep, threshold)
    counts: Counter = Counter()
    written = 0
    for data, lang in ordered_map(job, inp, cfg.workers):
        counts[lang] += 1
        if data is not None:
            out.write(data)
            written += 1
    return {"lines": sum(counts.values()), "written": written, "languages": dict(sorted(counts.items()))}


def cmd_dce_select(args, cfg, inp, out) -> dict:
    if args.top_n is not None:
        mode = TopN(args.top_n)
    elif args.ratio is not None and args.authentic_count is not None:
        mode = Ratio(args.ratio, args.authentic_count)
    else:
        raise UsageError("give --top-n N, or --ratio R with --authentic-count N")
    faults = 0

    def records() -> Iterator[ScoredPair]:
        nonlocal faults
        for lineno, raw in enumerate(inp):
            text = raw.decode("utf-8", "surrogateescape").rstrip("\r\n")
            try:
                yield parse_score_line(text)
            except ValueError as e:
                if cfg.strict:
                    raise DataFault(lineno, str(e)) from None
                faults += 1
                # keeps positions aligned with a companion bitext file
                yield ScoredPair(("malformed", lineno), float("nan"), float("nan"))

    try:
        sel = select(records(), mode, check_duplicates=not args.no_duplicate_check)
    except DuplicateId as e:
        raise DataFault(0, str(e)) from None
    if args.bitext:
        wanted = iter(sel.indices)
        nxt = next(wanted, None)
        with open(args.bitext, "rb") as fh:
            for i, raw in enumerate(fh):
                if nxt is None:
                    break
                if i == nxt:
                    out.write(raw if raw.endswith(b"\n") else raw + b"\n")
                    nxt = next(wanted, None)
        if nxt is not None:
            raise DataFault(nxt, "bitext file is shorter than the score file")
    else:
        for rec in sel.kept:
            out.write(f"{rec[1].id}\n".encode("utf-8", "surrogateescape"))
    return {"total": sel.total, "invalid": sel.invalid, "malformed": faults, "requested": sel.requested, "kept": len(sel.kept)}


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-i", "--input", help="input file (default: stdin)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--config", help="INI config file (default: $UKCS_PREP_CONFIG)")
    common.add_argument("--workers", type=int, help="worker processes (default 1)")
    common.add_argument("--stats-out", help="write a JSON stats document here")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=None, help="abort on the first data fault (default)")
    mode.add_argument("--lenient", dest="strict", action="store_false", help="count and skip faulty records")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ukcs-prep", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=fn)
        return p

    for name, fn, help in (
        ("romanize", cmd_romanize, "Cyrillic to reversible Czech-style Latin"),
        ("deromanize", cmd_deromanize, "invert romanize"),
    ):
        add(name, fn, help).add_argument("--table", help="TSV transliteration table (default: built-in Czech)")

    p = add("inca-train", cmd_inca_train, "count casing variants and write a vocabulary")
    p.add_argument("--vocab-out", "-V", required=True, help="vocabulary file to write")
    p.add_argument("--min-count", type=int, default=2, help="minimum count for a stored variant (default 2)")
    p.add_argument("--source", help="label recorded in the vocabulary file")
    p.add_argument("--add", action="append", metavar="FILE", help="more text whose counts are summed in (e.g. synthetic data)")
    for name, fn, help in (
        ("inca-encode", cmd_inca_encode, "lowercase with inline casing tags"),
        ("inca-decode", cmd_inca_decode, "restore casing from inline tags"),
    ):
        add(name, fn, help).add_argument("--vocab", help="casing vocabulary file")

    p = add("noise", cmd_noise, "seeded case and punctuation noise")
    p.add_argument("--seed", type=int, help="global seed")
    for name in ("drop-initial-cap", "lowercase-all", "uppercase-span", "drop-final-punct", "add-punct"):
        p.add_argument(f"--p-{name}", type=float, dest=f"p_{name.replace('-', '_')}", metavar="P")

    p = add("filter-parallel", cmd_filter_parallel, "clean a src<TAB>tgt bitext")
    p.add_argument("--corpus-tag", default="", help="corpus name, e.g. XLEnt (exempt corpora skip langid and ratio)")
    p.add_argument("--rules", help="INI rule file (default: built-in rules)")
    p.add_argument("--lexicon", help="municipality lexicon TSV")
    p.add_argument("--no-default-rules", action="store_true", help="run no rules unless --rules/--lexicon given")
    p.add_argument("--model", help="language model (default: built-in cs/uk/ru)")
    p.add_argument("--langid-threshold", type=float)
    p.add_argument("--ratio-min", type=float)
    p.add_argument("--ratio-max", type=float)
    p.add_argument("--exempt", help="comma-separated exempt corpus tags")
    p.add_argument("--no-langid", action="store_true")
    p.add_argument("--no-ratio", action="store_true")
    p.add_argument("--no-rules", action="store_true")

    p = add("filter-mono", cmd_filter_mono, "length and printability filter for monolingual text")
    p.add_argument("--lang", required=True, choices=("cs", "uk"))

    p = add("langid-train", cmd_langid_train, "train a character n-gram language model")
    p.add_argument("--lang", action="append", required=True, metavar="LANG=FILE")
    p.add_argument("-k", type=int, default=DEFAULT_K, help=f"profile size (default {DEFAULT_K})")
    p.add_argument("--model-out", "-m", required=True)

    p = add("langid", cmd_langid, "label lines with language and confidence, or keep one language")
    p.add_argument("--model", help="language model (default: built-in cs/uk/ru)")
    p.add_argument("--keep", metavar="LANG", help="output only lines detected as LANG")
    p.add_argument("--threshold", type=float, help="minimum confidence for --keep")

    p = add("dce-select", cmd_dce_select, "keep the best pairs by dual cross-entropy")
    p.add_argument("--scores", help="id<TAB>fwd<TAB>bwd file (alias of --input)")
    p.add_argument("--top-n", type=int)
    p.add_argument("--ratio", type=float)
    p.add_argument("--authentic-count", type=int)
    p.add_argument("--bitext", help="write these lines (matched by line number) instead of ids")
    p.add_argument("--no-duplicate-check", action="store_true", help="skip the O(total) duplicate id check")
    return parser


def _overrides(args) -> dict:
    o = {"workers": args.workers, "stats_out": args.stats_out, "strict": args.strict}
    if args.command == "noise":
        o["noise.global_seed"] = args.seed
        for name in ("drop_initial_cap", "lowercase_all", "uppercase_span", "drop_final_punct", "add_punct"):
            o[f"noise.p_{name}"] = getattr(args, f"p_{name}")
    if args.command == "filter-parallel":
        o["filter.langid_threshold"] = args.langid_threshold
        o["filter.ratio_min"] = args.ratio_min
        o["filter.ratio_max"] = args.ratio_max
        if args.exempt is not None:
            o["filter.exempt_corpora"] = frozenset(t.strip() for t in args.exempt.split(",") if t.strip())
        for step in ("langid", "ratio", "rules"):
            if getattr(args, f"no_{step}"):
                o[f"filter.{step}"] = False
    return o


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "scores", None):
        if args.input:
            parser.error("give either --scores or --input")
        args.input = args.scores
    try:
        cfg = load_config(args.config, _overrides(args))
        with ExitStack() as stack:
            inp = stack.enter_context(open(args.input, "rb")) if args.input else sys.stdin.buffer
            out = stack.enter_context(open(args.output, "wb")) if args.output else sys.stdout.buffer
            stats = args.func(args, cfg, inp, out)
            out.flush()
    except (ConfigError, UsageError) as e:
        print(f"ukcs-prep: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"ukcs-prep: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataFault as e:
        print(f"ukcs-prep: data fault: {e}", file=sys.stderr)
        return EXIT_DATA
    if cfg.stats_out:
        doc = {"command": args.command, "version": __version__, "config": cfg.to_dict(), "stats": stats}
        with open(cfg.stats_out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False, sort_keys=True, default=sorted)
            fh.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
