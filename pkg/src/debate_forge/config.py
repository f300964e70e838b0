"""INI-style run configuration with ``[textrank]``, ``[sentiment]``,
``[classify]`` and ``[ingest]`` sections of ``key = value`` lines."""

from __future__ import annotations

import configparser
import dataclasses
import os
from pathlib import Path
from typing import Any, Mapping, TypeVar

ENV_VAR = "DEBATE_FORGE_CONFIG"

T = TypeVar("T")


class ConfigError(ValueError):
    pass


def load_config(path: str | Path | None = None) -> dict[str, dict[str, str]]:
    """Sections of the config file at ``path``, else ``$DEBATE_FORGE_CONFIG``."""
    path = path or os.environ.get(ENV_VAR) or None
    if path is None:
        return {}
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return {s: {k: v.strip().strip('"') for k, v in parser.items(s)} for s in parser.sections()}


def _coerce(value: str, like: Any, key: str) -> Any:
    try:
        if isinstance(like, bool):
            return value.lower() in ("1", "true", "yes", "on")
        if isinstance(like, int):
            return int(float(value)) if "e" in value.lower() else int(value, 0)
        if isinstance(like, float):
            return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value


def apply_section(obj: T, section: Mapping[str, str], ignore: tuple[str, ...] = ()) -> T:
    """Copy of dataclass ``obj`` with fields overridden from ``section``."""
    names = {f.name for f in dataclasses.fields(obj)}
    changes = {}
    for key, value in section.items():
        if key in ignore:
            continue
        if key not in names:
            raise ConfigError(f"unknown key {key!r} for {type(obj).__name__}")
        changes[key] = _coerce(value, getattr(obj, key), key)
    try:
        return dataclasses.replace(obj, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
