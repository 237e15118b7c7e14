import pickle
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ukcs_prep.romanizer import (
    LATIN_CLOSE,
    LATIN_OPEN,
    SEPARATOR,
    RomanizationMode,
    TableError,
    TranslitTable,
    UnbalancedDelimiter,
    default_czech_table,
    deromanize,
    romanize,
    table_for,
)
from ukcs_prep.textmodel import CasingPattern, classify_casing

UK_LOWER = "абвгґдеєжзиіїйклмнопрстуфхцчшщьюя"
UK_ALPHABET = UK_LOWER + UK_LOWER.upper()
RESERVED = SEPARATOR + LATIN_OPEN + LATIN_CLOSE
ALPHABET = UK_ALPHABET + string.ascii_letters + string.digits + string.punctuation + " ’ʼ«»—…" + RESERVED + "ыэъё"

texts = st.text(st.sampled_from(ALPHABET), max_size=40)


def test_reference_example():
    src = "Зараз у нас є 4-місячні миші"
    assert romanize(src) == "Zaraz u nas je 4-misjačni myši"
    assert deromanize("Zaraz u nas je 4-misjačni myši") == src


@pytest.mark.parametrize(
    "src, expected",
    [
        ("миші", "myši"),
        ("OK, добре", f"{LATIN_OPEN}OK{LATIN_CLOSE}, dobre"),
        ("", ""),
        ("цг", f"c{SEPARATOR}h"),
        ("шч", f"š{SEPARATOR}č"),
        ("йа", f"j{SEPARATOR}a"),
        ("сх", "sch"),
        ("Є", "Je"),
        ("ЄВРО", "JEVRO"),
        ("Щука", "Ščuka"),
        ("ЩУКА", "ŠČUKA"),
        ("ь", "ʼ"),
        ("ы", f"{LATIN_OPEN}ы{LATIN_CLOSE}"),
        ("з’їзд", "z’jizd"),
        (f"a{SEPARATOR}b", f"{LATIN_OPEN}a{SEPARATOR}b{LATIN_CLOSE}"),
        (f"x{LATIN_CLOSE}y", f"{LATIN_OPEN}x{LATIN_CLOSE}{LATIN_CLOSE}y{LATIN_CLOSE}"),
    ],
)
def test_romanize_examples(src, expected):
    assert romanize(src) == expected
    assert deromanize(expected) == src


def test_uppercase_soft_sign_is_escaped():
    # the output ʼ has no case, so Ь could not be told apart from ь
    assert romanize("Ьо") == f"{LATIN_OPEN}Ь{LATIN_CLOSE}o"


def test_decoder_reads_both_title_and_upper_forms():
    assert deromanize("Je") == deromanize("JE") == "Є"
    assert deromanize("je") == "є"
    assert deromanize(f"c{SEPARATOR}h") == "цг"


def test_fixed_points():
    table = default_czech_table()
    fixed = dict(и="y", і="i", ш="š", ч="č", є="je", я="ja", м="m", с="s", з="z", р="r", у="u", н="n", а="a")
    for cyr, lat in fixed.items():
        assert table.lookup(cyr) == lat
    assert len(table.entries) == 33
    assert table.digraph_outputs == {"je", "ji", "ju", "ja", "ch", "šč"}


def test_mode_selects_czech_table():
    assert table_for(RomanizationMode.CZECH) is default_czech_table()


def test_unbalanced_delimiter():
    with pytest.raises(UnbalancedDelimiter) as err:
        deromanize(f"ab {LATIN_OPEN}cd")
    assert err.value.position == 3


def test_exhaustive_pairs_round_trip():
    default_czech_table().validate()
    letters = UK_ALPHABET
    for a in letters:
        for b in letters:
            assert deromanize(romanize(a + b)) == a + b


@given(texts)
def test_round_trip(s):
    assert deromanize(romanize(s)) == s


@given(st.text(st.characters(blacklist_categories=("Cs",)), max_size=30))
def test_round_trip_any_unicode(s):
    assert deromanize(romanize(s)) == s


@given(texts)
def test_no_convertible_cyrillic_outside_runs(s):
    out = romanize(s)
    outside = []
    depth = False
    i = 0
    while i < len(out):
        c = out[i]
        if not depth and c == LATIN_OPEN:
            depth = True
        elif depth and c == LATIN_CLOSE:
            if out[i + 1 : i + 2] == LATIN_CLOSE:
                i += 1
            else:
                depth = False
        elif not depth:
            outside.append(c)
        i += 1
    assert not set(outside) & set(UK_LOWER)


@given(texts)
def test_second_pass_only_adds_escapes(s):
    once = romanize(s)
    twice = romanize(once)
    assert deromanize(twice) == once


@pytest.mark.parametrize("letter", [c for c in UK_ALPHABET if c not in "Ьь"])
def test_case_shape_of_single_letters(letter):
    word = letter + "а"
    assert classify_casing(romanize(word)) is classify_casing(word)


def test_table_rejects_ambiguous_or_reserved_outputs():
    with pytest.raises(TableError):
        TranslitTable({"а": "a", "б": "a"})
    with pytest.raises(TableError):
        TranslitTable({"а": "a" + SEPARATOR})
    with pytest.raises(TableError):
        TranslitTable({"A": "a"})
    with pytest.raises(TableError):
        TranslitTable({"а": "A"})
    with pytest.raises(TableError):
        TranslitTable({"а": "ба", "б": "b"})


def test_separator_makes_prefix_codes_decodable():
    table = TranslitTable({"а": "a", "б": "b", "в": "ab", "г": "ba", "д": "bab"})
    table.validate()
    for s in ["аб", "ба", "бб", "ав", "вб", "бг", "гб", "абаб", "ббаа"]:
        assert deromanize(romanize(s, table), table) == s


def test_table_file_round_trip(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("# English-ish override\nш\tsh\nх\tkh\n", encoding="utf-8")
    table = TranslitTable.from_file(path)
    assert romanize("шахи", table) == "shakhy"
    assert deromanize("shakhy", table) == "шахи"
    out = tmp_path / "out.tsv"
    table.write(out)
    assert TranslitTable.from_file(out) == table


def test_table_file_bad_line(tmp_path):
    path = tmp_path / "table.tsv"
    path.write_text("ш sh\n", encoding="utf-8")
    with pytest.raises(TableError):
        TranslitTable.from_file(path)


def test_table_pickles():
    table = default_czech_table()
    clone = pickle.loads(pickle.dumps(table))
    assert clone == table
    assert romanize("Щука", clone) == "Ščuka"
