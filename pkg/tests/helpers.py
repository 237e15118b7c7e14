"""Synthetic corpora for throughput checks."""

import bisect
import random
from pathlib import Path

from .conftest import DATA, read_lines


def sentences(lang: str, split: str = "train") -> list[str]:
    return read_lines(DATA / "langid" / f"{lang}.{split}.txt")


def write_synthetic_bitext(path: Path, n: int, seed: int = 0) -> None:
    """``n`` tab-separated cs/uk pairs.

    Most pairs join sentences of similar length so they pass the filters; the
    rest mix in Russian targets, swapped sides, length mismatches and
    unprintable fields.
    """
    rng = random.Random(seed)
    cs, ru = sentences("cs"), sentences("ru")
    uk = sorted(sentences("uk"), key=len)
    uk_lens = [len(s) for s in uk]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for _ in range(n):
            src = rng.choice(cs)
            j = bisect.bisect_left(uk_lens, round(len(src) * rng.uniform(0.85, 1.15)))
            tgt = uk[min(j, len(uk) - 1)]
            r = rng.random()
            if r < 0.05:
                tgt = rng.choice(ru)
            elif r < 0.08:
                src, tgt = tgt, src
            elif r < 0.12:
                tgt = tgt + " " + rng.choice(uk) + " " + rng.choice(uk)
            elif r < 0.13:
                src = "\x07"
            fh.write(f"{src}\t{tgt}\n")


def random_sentences(n: int, seed: int = 0) -> list[str]:
    """``n`` Ukrainian sentences drawn with replacement."""
    rng = random.Random(seed)
    pool = sentences("uk") + sentences("uk", "test")
    return [rng.choice(pool) for _ in range(n)]
