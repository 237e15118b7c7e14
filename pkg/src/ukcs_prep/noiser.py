"""Seeded orthographic noise: dropped capitals, case shifts and punctuation slips.

Every line gets its own generator seeded from ``(global_seed, line_index)``, so
output does not depend on processing order or the number of workers.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from . import _backend
from .textmodel import tokenize

__all__ = ["NoiseConfig", "line_seed", "noise_line", "FINAL_PUNCT", "ADDED_PUNCT", "strip_final_punct"]

FINAL_PUNCT = ".,!?…"
ADDED_PUNCT = ".!?"
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseConfig:
    p_drop_initial_cap: float = 0.1
    p_lowercase_all: float = 0.05
    p_uppercase_span: float = 0.02
    p_drop_final_punct: float = 0.1
    p_add_punct: float = 0.05
    global_seed: int = 0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name.startswith("p_") and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")
        if not 0 <= self.global_seed <= _MASK64:
            raise ValueError("global_seed must fit in 64 unsigned bits")

    @classmethod
    def zero(cls, global_seed: int = 0) -> NoiseConfig:
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, global_seed)

    def to_dict(self) -> dict:
        return asdict(self)


def line_seed(global_seed: int, line_index: int) -> int:
    return _backend.kernels.splitmix64((global_seed ^ line_index) & _MASK64)


# Case changes are applied only where they are reversible one-to-one, so noise
# never alters anything but case (no 'ß' -> 'SS', no 'İ' -> 'i̇').
def _lower_char(c: str) -> str:
    lo = c.lower()
    return lo if len(lo) == 1 and lo.upper() == c else c


def _upper_char(c: str) -> str:
    up = c.upper()
    return up if len(up) == 1 and up.lower() == c else c


def _lower(s: str) -> str:
    return "".join(map(_lower_char, s))


def _upper(s: str) -> str:
    return "".join(map(_upper_char, s))


def strip_final_punct(s: str) -> str:
    return s.rstrip().rstrip(FINAL_PUNCT)


def noise_line(line: str, cfg: NoiseConfig, seed: int) -> str:
    rng = random.Random(seed)
    # decision draws come first and in a fixed order, so each rule fires
    # independently of what the others did
    u_lower_all, u_drop_cap, u_span, u_drop_punct, u_add_punct = (rng.random() for _ in range(5))

    if u_lower_all < cfg.p_lowercase_all:
        line = _lower(line)
    else:
        if u_drop_cap < cfg.p_drop_initial_cap:
            for i, c in enumerate(line):
                lo = _lower_char(c)
                if lo != c:
                    line = line[:i] + lo + line[i + 1 :]
                    break
                if c.lower() != c.upper():
                    break
        if u_span < cfg.p_uppercase_span:
            line = _uppercase_span(line, rng)

    body = line.rstrip()
    tail = line[len(body) :]
    if u_drop_punct < cfg.p_drop_final_punct:
        if body and body[-1] in FINAL_PUNCT:
            body = body[:-1]
    elif u_add_punct < cfg.p_add_punct and body:
        if body[-1] in FINAL_PUNCT:
            body += body[-1]
        else:
            body += rng.choice(ADDED_PUNCT)
    return body + tail


def _uppercase_span(line: str, rng: random.Random) -> str:
    tt = tokenize(line)
    if not tt.tokens:
        return line
    start = rng.randrange(len(tt.tokens))
    length = rng.randint(1, 3)
    parts = []
    for i, (ws, body) in enumerate(tt.tokens):
        parts.append(ws)
        parts.append(_upper(body) if start <= i < start + length else body)
    parts.append(tt.trailing)
    return "".join(parts)
