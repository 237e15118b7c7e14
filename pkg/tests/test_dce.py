import io
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ukcs_prep.dce import DuplicateId, Ratio, ScoredPair, TopN, dce_score, read_scores, select


def oracle(records, n):
    valid = []
    for i, r in enumerate(records):
        if all(math.isfinite(x) and x >= 0 for x in (r.fwd_xent, r.bwd_xent)):
            valid.append((abs(r.fwd_xent - r.bwd_xent) + (r.fwd_xent + r.bwd_xent) / 2, i, r.id))
    valid.sort()
    return sorted(valid[:n], key=lambda t: t[1])


def test_score_examples():
    assert dce_score(0, 0) == 0
    assert dce_score(1, 1) == 1
    assert dce_score(2, 0) == 3
    assert dce_score(0, 2) == 3


@pytest.mark.parametrize("bad", [(math.nan, 1), (1, math.inf), (-0.1, 1)])
def test_score_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        dce_score(*bad)


def _records(scores):
    # fwd = bwd = s gives score s
    return [ScoredPair(f"r{i}", s, s) for i, s in enumerate(scores)]


def test_select_example():
    sel = select(_records([3, 1, 2, 1]), TopN(2))
    assert sel.ids == ["r1", "r3"]


def test_ties_go_to_earlier_records():
    sel = select(_records([1, 1, 1, 1]), TopN(2))
    assert sel.ids == ["r0", "r1"]


def test_identity_when_n_is_total():
    recs = _records([5, 4, 3])
    assert select(recs, TopN(3)).ids == ["r0", "r1", "r2"]


def test_ratio_mode():
    assert Ratio(5.0, 3).resolve() == 15
    assert len(select(_records(range(100)), Ratio(5.0, 3)).kept) == 15
    assert Ratio(0.5, 5).resolve() == 3  # 2.5 rounds half up
    with pytest.raises(ValueError):
        Ratio(0, 5)
    with pytest.raises(ValueError):
        TopN(0)


def test_invalid_records_are_counted(caplog):
    recs = [ScoredPair("a", math.nan, 1), ScoredPair("b", 1, 1), ScoredPair("c", -1, 1)]
    sel = select(recs, TopN(2))
    assert sel.ids == ["b"]
    assert sel.invalid == 2 and sel.total == 3
    assert "only 1 are valid" in caplog.text


def test_duplicate_ids():
    with pytest.raises(DuplicateId):
        select([ScoredPair("a", 1, 1), ScoredPair("a", 2, 2)], TopN(1))
    assert select([ScoredPair("a", 1, 1), ScoredPair("a", 2, 2)], TopN(1), check_duplicates=False).indices == [0]


def test_read_scores():
    recs = list(read_scores(io.StringIO("a\t1.5\t2\nb\tx\t1\n")))
    assert recs[0] == ScoredPair("a", 1.5, 2.0)
    assert math.isnan(recs[1].fwd_xent)
    with pytest.raises(ValueError, match="line 2"):
        list(read_scores(io.StringIO("a\t1\t2\nbroken\n")))


def test_matches_full_sort_oracle():
    rng = random.Random(11)
    recs = [ScoredPair(i, rng.choice([0.5, 1.0, 1.5, rng.random() * 5]), rng.random() * 5) for i in range(1000)]
    for n in rng.sample(range(1, 1001), 20):
        got = select(recs, TopN(n))
        assert [(s, i, r.id) for i, r, s in got.kept] == oracle(recs, n)


entropies = st.one_of(st.floats(0, 20), st.sampled_from([0.0, 1.0, 2.0, math.nan, -1.0]))
record_lists = st.lists(st.tuples(entropies, entropies), max_size=60).map(
    lambda xs: [ScoredPair(i, f, b) for i, (f, b) in enumerate(xs)]
)


@given(record_lists, st.integers(1, 70))
def test_oracle_property(recs, n):
    assert [(s, i, r.id) for i, r, s in select(recs, TopN(n)).kept] == oracle(recs, n)


@given(record_lists, st.integers(1, 30), st.integers(0, 30))
def test_monotone_in_n(recs, n, extra):
    small = set(select(recs, TopN(n)).ids)
    assert small <= set(select(recs, TopN(n + extra)).ids)


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), max_size=40), st.integers(1, 40), st.sampled_from([2, 4, 0.5, 0.25]))
def test_scale_invariance(pairs, n, c):
    # dyadic values keep the arithmetic exact, so ties survive scaling
    recs = [ScoredPair(i, f / 4, b / 4) for i, (f, b) in enumerate(pairs)]
    scaled = [ScoredPair(r.id, r.fwd_xent * c, r.bwd_xent * c) for r in recs]
    assert select(recs, TopN(n)).ids == select(scaled, TopN(n)).ids
