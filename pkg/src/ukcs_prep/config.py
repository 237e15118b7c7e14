"""Pipeline configuration: built-in defaults, then an INI file, then flags.

The config file path comes from ``--config`` or the ``UKCS_PREP_CONFIG``
environment variable. Unknown sections and keys are errors.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field
from typing import Any, Mapping

from .corpus_filter import FilterConfig
from .noiser import NoiseConfig

__all__ = ["ConfigError", "PipelineConfig", "ENV_VAR", "load_config"]

ENV_VAR = "UKCS_PREP_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    filter: FilterConfig = field(default_factory=FilterConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    table: str | None = None
    vocab: str | None = None
    langid_model: str | None = None
    rules_file: str | None = None
    lexicon_file: str | None = None
    workers: int = 1
    stats_out: str | None = None
    strict: bool = True

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        out["filter"] = self.filter.to_dict()
        out["noise"] = self.noise.to_dict()
        return out

    def replace(self, **changes: Any) -> PipelineConfig:
        """Copy with top-level fields and ``filter.x``/``noise.x`` fields changed."""
        nested: dict[str, dict] = {"filter": {}, "noise": {}}
        top = {}
        for key, value in changes.items():
            head, _, tail = key.partition(".")
            if tail:
                nested[head][tail] = value
            else:
                top[key] = value
        try:
            for name, sub in nested.items():
                if sub:
                    top[name] = dataclasses.replace(getattr(self, name), **sub)
            return dataclasses.replace(self, **top)
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from None


# section -> key -> PipelineConfig field path
_LAYOUT: dict[str, dict[str, str]] = {
    "filter": {
        **{f.name: f"filter.{f.name}" for f in dataclasses.fields(FilterConfig)},
        "rules_file": "rules_file",
        "lexicon_file": "lexicon_file",
    },
    "noise": {
        **{f.name: f"noise.{f.name}" for f in dataclasses.fields(NoiseConfig) if f.name != "global_seed"},
        "seed": "noise.global_seed",
    },
    "romanize": {"table": "table"},
    "inca": {"vocab": "vocab"},
    "langid": {"model": "langid_model"},
    "run": {"workers": "workers", "stats_out": "stats_out", "strict": "strict"},
}


def _field_type(path: str) -> Any:
    head, _, tail = path.partition(".")
    cls = {"filter": FilterConfig, "noise": NoiseConfig}.get(head) if tail else PipelineConfig
    name = tail or head
    default = next(f for f in dataclasses.fields(cls) if f.name == name)
    proto = getattr(cls(), name)
    return default.type if proto is None else type(proto)


def _convert(raw: str, kind: Any, where: str) -> Any:
    try:
        if kind is bool:
            value = configparser.ConfigParser.BOOLEAN_STATES.get(raw.lower())
            if value is None:
                raise ValueError(f"not a boolean: {raw!r}")
            return value
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is frozenset:
            return frozenset(x.strip() for x in raw.split(",") if x.strip())
        return raw or None
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from None


def parse_config_text(text: str, origin: str = "<config>") -> dict[str, Any]:
    """Field-path -> value overrides from INI text."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as e:
        raise ConfigError(str(e)) from None
    out: dict[str, Any] = {}
    for section in cp.sections():
        keys = _LAYOUT.get(section)
        if keys is None:
            raise ConfigError(f"{origin}: unknown section [{section}]")
        for key, raw in cp[section].items():
            path = keys.get(key)
            if path is None:
                raise ConfigError(f"{origin}: unknown key {key!r} in [{section}]")
            out[path] = _convert(raw.strip(), _field_type(path), f"{origin} [{section}] {key}")
    return out


def load_config(
    path: str | None = None,
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
) -> PipelineConfig:
    """Defaults, then ``path`` (or the file named by ``UKCS_PREP_CONFIG``), then ``overrides``."""
    environ = os.environ if environ is None else environ
    path = path or environ.get(ENV_VAR) or None
    cfg = PipelineConfig()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        cfg = cfg.replace(**parse_config_text(text, origin=path))
    if overrides:
        cfg = cfg.replace(**{k: v for k, v in overrides.items() if v is not None})
    return cfg
