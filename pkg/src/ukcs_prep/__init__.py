"""Corpus preprocessing for Czech-Ukrainian machine translation."""

__version__ = "0.1.0"

from ._backend import name as backend  # noqa: E402
from .corpus_filter import FilterConfig, PairRecord, RuleSet, filter_mono, filter_pair, run_pipeline  # noqa: E402
from .dce import Ratio, ScoredPair, TopN, dce_score, select  # noqa: E402
from .inca import CasingVocabulary, decode as inca_decode, encode as inca_encode, train_vocab  # noqa: E402
from .langid import LangIdModel, default_model, detect, train_langid  # noqa: E402
from .noiser import NoiseConfig, noise_line  # noqa: E402
from .romanizer import TranslitTable, default_czech_table, deromanize, romanize  # noqa: E402

__all__ = [
    "__version__",
    "backend",
    "FilterConfig",
    "PairRecord",
    "RuleSet",
    "filter_mono",
    "filter_pair",
    "run_pipeline",
    "Ratio",
    "ScoredPair",
    "TopN",
    "dce_score",
    "select",
    "CasingVocabulary",
    "inca_decode",
    "inca_encode",
    "train_vocab",
    "LangIdModel",
    "default_model",
    "detect",
    "train_langid",
    "NoiseConfig",
    "noise_line",
    "TranslitTable",
    "default_czech_table",
    "deromanize",
    "romanize",
]
