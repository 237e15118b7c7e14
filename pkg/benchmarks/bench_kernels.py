"""Compare the compiled and pure-Python kernels on typical input.

    python benchmarks/bench_kernels.py [--lines N] [--repeat R]
"""

import argparse
import random
import timeit
from pathlib import Path

from ukcs_prep import _kernels_py
from ukcs_prep.langid import default_model, ranked_ngrams
from ukcs_prep.romanizer import default_czech_table

try:
    from ukcs_prep import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

DATA = Path(__file__).resolve().parent.parent / "tests" / "data" / "langid"


def load(lang: str, n: int, rng: random.Random) -> list[str]:
    pool = (DATA / f"{lang}.train.txt").read_text(encoding="utf-8").splitlines()
    return [rng.choice(pool) for _ in range(n)]


def cases(k, uk: list[str], cs: list[str]):
    table = default_czech_table()
    prepared = k.prepare(table.plan)
    roman = [k.romanize(s, prepared) for s in uk]
    words = [s.lower().split() for s in cs]
    profile = default_model().profiles[0].ranks
    docs = []
    for w in words:
        counts: dict[str, int] = {}
        k.ngram_counts(w, counts)
        docs.append(list(ranked_ngrams(counts, 3000)))
    return {
        "romanize": lambda: [k.romanize(s, prepared) for s in uk],
        "deromanize": lambda: [k.deromanize(s, prepared) for s in roman],
        "ngram_counts": lambda: [k.ngram_counts(w, {}) for w in words],
        "out_of_place": lambda: [k.out_of_place(d, profile, 3000) for d in docs],
        "splitmix64": lambda: [k.splitmix64(i) for i in range(len(uk))],
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lines", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rng = random.Random(0)
    uk, cs = load("uk", args.lines, rng), load("cs", args.lines, rng)
    backends = {"python": _kernels_py}
    if _kernels_c is not None:
        backends["cython"] = _kernels_c
    results: dict[str, dict[str, float]] = {}
    for name, k in backends.items():
        for kernel, fn in cases(k, uk, cs).items():
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            results.setdefault(kernel, {})[name] = best
    print(f"{'kernel':<14}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}   ({args.lines} lines)")
    for kernel, times in results.items():
        py, cy = times["python"], times.get("cython")
        cy_s = f"{cy:12.3f}{py / cy:9.1f}x" if cy else f"{'n/a':>12}{'':>10}"
        print(f"{kernel:<14}{py:12.3f}{cy_s}")


if __name__ == "__main__":
    main()
