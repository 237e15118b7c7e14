import pytest

from ukcs_prep.config import ENV_VAR, ConfigError, PipelineConfig, load_config, parse_config_text


def test_defaults():
    cfg = load_config(environ={})
    assert cfg == PipelineConfig()
    assert cfg.filter.ratio_min == 0.67
    assert cfg.noise.p_drop_initial_cap == 0.1
    assert cfg.strict and cfg.workers == 1


def test_file_then_overrides(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text(
        "[filter]\nratio_max = 2.0\nexempt_corpora = XLEnt, WikiMatrix\nlangid = no\n"
        "[noise]\nseed = 42\np_add_punct = 0.5\n[run]\nworkers = 3\nstrict = false\n"
        "[romanize]\ntable = t.tsv\n",
        encoding="utf-8",
    )
    cfg = load_config(str(path), {"noise.global_seed": 7, "workers": None}, environ={})
    assert cfg.filter.ratio_max == 2.0
    assert cfg.filter.exempt_corpora == {"XLEnt", "WikiMatrix"}
    assert cfg.filter.langid is False
    assert cfg.noise.global_seed == 7
    assert cfg.noise.p_add_punct == 0.5
    assert cfg.workers == 3
    assert cfg.strict is False
    assert cfg.table == "t.tsv"


def test_environment_variable(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[run]\nworkers = 2\n", encoding="utf-8")
    assert load_config(environ={ENV_VAR: str(path)}).workers == 2


@pytest.mark.parametrize(
    "text",
    [
        "[filtre]\nratio_min = 0.5\n",
        "[filter]\nratio_mn = 0.5\n",
        "[filter]\nratio_min = abc\n",
        "[filter]\nratio_min = 2\n",
        "[noise]\np_add_punct = 3\n",
        "[run]\nstrict = maybe\n",
        "[run]\nworkers = 0\n",
        "no section\n",
    ],
)
def test_bad_config(tmp_path, text):
    path = tmp_path / "c.ini"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path), environ={})


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/c.ini", environ={})


def test_to_dict_is_plain():
    d = PipelineConfig().to_dict()
    assert d["filter"]["exempt_corpora"] == ["XLEnt"]
    assert d["noise"]["global_seed"] == 0
    assert parse_config_text("") == {}
