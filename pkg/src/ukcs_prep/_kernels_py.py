"""Pure-Python kernels; the compiled ``_kernels`` module mirrors these signatures."""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def prepare(plan):
    return plan


def romanize(line: str, plan) -> str:
    close = plan.close
    if plan.escape_re.search(line) is not None:
        line = plan.escape_re.sub(
            lambda m: plan.open + m.group().replace(close, close + close) + close, line
        )
    if plan.sep_re is not None:
        line = plan.sep_re.sub(plan.sep, line)
    line = plan.upper_run_re.sub(lambda m: m.group().translate(plan.upper_table), line)
    return line.translate(plan.single_table)


def _decode_plain(text: str, plan) -> str:
    if plan.multi_re is not None:
        table = plan.multi_table
        text = plan.multi_re.sub(lambda m: table[m.group()], text)
    return text.translate(plan.decode_table)


def deromanize(line: str, plan) -> tuple[str, int]:
    """Return ``(text, -1)``, or ``("", offset)`` of an unterminated run."""
    opener, close = plan.open, plan.close
    if opener not in line:
        return _decode_plain(line, plan), -1
    out = []
    pos = 0
    for m in plan.run_re.finditer(line):
        piece = line[pos : m.start()]
        if opener in piece:
            return "", pos + piece.index(opener)
        out.append(_decode_plain(piece, plan))
        out.append(m.group(1).replace(close + close, close))
        pos = m.end()
    tail = line[pos:]
    if opener in tail:
        return "", pos + tail.index(opener)
    out.append(_decode_plain(tail, plan))
    return "".join(out), -1


def ngram_counts(words: list[str], counts: dict[str, int]) -> None:
    """Add padded 1- to 3-gram counts of ``words`` into ``counts``."""
    get = counts.get
    for w in words:
        p = "_" + w + "_"
        m = len(p)
        for i in range(m):
            for n in (1, 2, 3):
                if i + n > m:
                    break
                g = p[i : i + n]
                if g != "_":
                    counts[g] = get(g, 0) + 1


def out_of_place(doc: list[str], profile: dict[str, int], max_penalty: int) -> int:
    total = 0
    for rank, g in enumerate(doc):
        r = profile.get(g)
        total += max_penalty if r is None else abs(r - rank)
    return total


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)
