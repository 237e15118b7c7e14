import pytest
from hypothesis import given
from hypothesis import strategies as st

from ukcs_prep import _backend
from ukcs_prep.noiser import NoiseConfig, line_seed, noise_line, strip_final_punct

lines = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\n"), max_size=50)
configs = st.builds(
    NoiseConfig,
    *[st.floats(0, 1) for _ in range(5)],
    st.integers(0, 2**64 - 1),
)


def test_line_seed_definition():
    assert line_seed(0, 0) == _backend.kernels.splitmix64(0)
    assert line_seed(5, 3) == _backend.kernels.splitmix64(5 ^ 3)


def test_line_seeds_do_not_collide():
    seeds = {line_seed(0x1234, i) for i in range(10**6)}
    assert len(seeds) == 10**6


def test_lowercase_all_example():
    cfg = NoiseConfig(0, 1, 0, 0, 0)
    assert noise_line("Dobrý den.", cfg, 123) == "dobrý den."


def test_drop_initial_cap_skips_leading_punctuation():
    cfg = NoiseConfig(p_drop_initial_cap=1, p_lowercase_all=0, p_uppercase_span=0, p_drop_final_punct=0, p_add_punct=0)
    assert noise_line("„Ahoj“, řekl Petr", cfg, 1) == "„ahoj“, řekl Petr"
    assert noise_line("4 Lidé", cfg, 1) == "4 lidé"


def test_drop_and_add_punct():
    drop = NoiseConfig(0, 0, 0, 1, 0)
    add = NoiseConfig(0, 0, 0, 0, 1)
    assert noise_line("Konec!  ", drop, 9) == "Konec  "
    assert noise_line("Konec!", add, 9) == "Konec!!"
    assert noise_line("Konec", add, 9)[-1] in ".!?"
    assert noise_line("", add, 9) == ""


def test_uppercase_span_touches_one_to_three_tokens():
    cfg = NoiseConfig(0, 0, 1, 0, 0)
    words = "jedna dva tři čtyři pět šest sedm".split()
    for seed in range(200):
        out = noise_line(" ".join(words), cfg, seed).split()
        changed = [i for i, (a, b) in enumerate(zip(words, out)) if a != b]
        assert 1 <= len(changed) <= 3
        assert changed == list(range(changed[0], changed[-1] + 1))
        assert all(out[i] == words[i].upper() for i in changed)


def test_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(p_add_punct=1.5)
    with pytest.raises(ValueError):
        NoiseConfig(global_seed=-1)
    assert NoiseConfig.zero().to_dict()["p_add_punct"] == 0.0


@given(lines, st.integers(0, 2**64 - 1))
def test_zero_probabilities_are_identity(line, seed):
    assert noise_line(line, NoiseConfig.zero(), seed) == line


@given(lines, configs, st.integers(0, 2**64 - 1))
def test_deterministic(line, cfg, seed):
    assert noise_line(line, cfg, seed) == noise_line(line, cfg, seed)


@given(lines, configs, st.integers(0, 2**64 - 1))
def test_only_case_and_final_punctuation_change(line, cfg, seed):
    out = noise_line(line, cfg, seed)
    assert strip_final_punct(out).lower() == strip_final_punct(line).lower()
    assert len(out) - len(line) in (-1, 0, 1)
