"""Regenerate the cs/uk/ru language-identification fixture under tests/data/langid.

Sentences are sampled word-by-word from the wordfreq frequency lists, so the
character n-gram statistics follow real running text. Training and held-out
splits use disjoint seeds. Requires ``pip install wordfreq`` (dev only).
"""

import argparse
import random
from pathlib import Path

import regex
import wordfreq

SCRIPTS = {"cs": r"\p{Latin}+", "uk": r"\p{Cyrillic}+", "ru": r"\p{Cyrillic}+"}


def vocabulary(lang, size):
    pattern = regex.compile(SCRIPTS[lang])
    words = [w for w in wordfreq.top_n_list(lang, size * 2) if pattern.fullmatch(w)][:size]
    weights = [wordfreq.word_frequency(w, lang) for w in words]
    return words, weights


def sentences(lang, count, seed, size=30000):
    rng = random.Random(f"{lang}:{seed}")
    words, weights = vocabulary(lang, size)
    for _ in range(count):
        n = rng.randint(5, 16)
        sent = rng.choices(words, weights, k=n)
        if rng.random() < 0.4:
            i = rng.randrange(1, n)
            sent[i - 1] += ","
        sent[0] = sent[0][:1].upper() + sent[0][1:]
        yield " ".join(sent) + rng.choice(".....?!")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).parents[1] / "tests/data/langid")
    ap.add_argument("--train", type=int, default=4000)
    ap.add_argument("--test", type=int, default=1000)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for lang in SCRIPTS:
        for split, count, seed in (("train", args.train, 1), ("test", args.test, 2)):
            path = args.out / f"{lang}.{split}.txt"
            path.write_text("\n".join(sentences(lang, count, seed)) + "\n", encoding="utf-8")
            print(path)


if __name__ == "__main__":
    main()
