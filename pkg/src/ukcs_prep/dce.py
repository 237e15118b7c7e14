"""Dual conditional cross-entropy scoring and bounded-memory top-n selection.

Scores come from outside (forward and backward translation models); this
module only combines them and keeps the ``n`` best records in one pass.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Hashable, Iterable, Iterator, TextIO

__all__ = [
    "ScoredPair",
    "DuplicateId",
    "TopN",
    "Ratio",
    "dce_score",
    "select",
    "Selection",
    "parse_score_line",
    "read_scores",
]

log = logging.getLogger(__name__)


class DuplicateId(ValueError):
    pass


@dataclass(frozen=True)
class ScoredPair:
    id: Hashable
    fwd_xent: float
    bwd_xent: float


@dataclass(frozen=True)
class TopN:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    def resolve(self) -> int:
        return self.n


@dataclass(frozen=True)
class Ratio:
    """Keep ``ratio`` times as many records as there are authentic pairs."""

    ratio: float
    authentic_count: int

    def __post_init__(self):
        if not self.ratio > 0 or self.authentic_count < 1:
            raise ValueError("ratio and authentic_count must be positive")

    def resolve(self) -> int:
        n = Decimal(str(self.ratio)) * self.authentic_count
        return int(n.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def dce_score(fwd: float, bwd: float) -> float:
    """``|fwd - bwd| + (fwd + bwd) / 2``; lower is better.

    Raises ValueError for NaN, infinite or negative entropies.
    """
    if not (math.isfinite(fwd) and math.isfinite(bwd)) or fwd < 0 or bwd < 0:
        raise ValueError(f"cross-entropies must be finite and non-negative, got {fwd}, {bwd}")
    return abs(fwd - bwd) + 0.5 * (fwd + bwd)


@dataclass
class Selection:
    """Selected records in input order, plus bookkeeping."""

    kept: list[tuple[int, ScoredPair, float]] = field(default_factory=list)
    total: int = 0
    invalid: int = 0
    requested: int = 0

    @property
    def ids(self) -> list[Hashable]:
        return [rec.id for _, rec, _ in self.kept]

    @property
    def indices(self) -> list[int]:
        return [i for i, _, _ in self.kept]


def select(
    records: Iterable[ScoredPair],
    mode: TopN | Ratio,
    check_duplicates: bool = True,
) -> Selection:
    """Keep the ``n`` lowest-scoring records; ties go to the earlier record.

    Memory is O(n) for the heap. Duplicate detection needs the set of all ids;
    pass ``check_duplicates=False`` to avoid it on huge inputs.
    """
    n = mode.resolve()
    # max-heap on (score, index) via negation; the root is the worst kept record
    heap: list[tuple[float, int, ScoredPair]] = []
    seen: set[Hashable] = set()
    total = invalid = 0
    for index, rec in enumerate(records):
        total += 1
        if check_duplicates:
            if rec.id in seen:
                raise DuplicateId(f"duplicate id {rec.id!r} at record {index}")
            seen.add(rec.id)
        try:
            score = dce_score(rec.fwd_xent, rec.bwd_xent)
        except ValueError:
            invalid += 1
            continue
        item = (-score, -index, rec)
        if len(heap) < n:
            heapq.heappush(heap, item)
        elif (score, index) < (-heap[0][0], -heap[0][1]):
            heapq.heapreplace(heap, item)
    valid = total - invalid
    if n > valid:
        log.warning("requested %d records but only %d are valid; keeping all", n, valid)
    kept = sorted((-neg_i, rec, -neg_s) for neg_s, neg_i, rec in heap)
    return Selection(kept=kept, total=total, invalid=invalid, requested=n)


def parse_score_line(line: str) -> ScoredPair:
    """One ``id<TAB>fwd<TAB>bwd`` record. Unparseable numbers become NaN."""
    parts = line.rstrip("\r\n").split("\t")
    if len(parts) != 3 or not parts[0]:
        raise ValueError(f"expected 'id<TAB>fwd<TAB>bwd', got {line!r}")
    return ScoredPair(parts[0], _float(parts[1]), _float(parts[2]))


def read_scores(fh: TextIO) -> Iterator[ScoredPair]:
    """Records of a score file; line ``i`` becomes record ``i``."""
    for lineno, line in enumerate(fh, 1):
        try:
            yield parse_score_line(line)
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return math.nan
