"""Run configuration: defaults, then a TOML file, then ``WF_*`` variables, then flags."""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .tree_groups import DEFAULT_GENERATOR_CAP, DEFAULT_MATRIX_ENTRY_LIMIT


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    generator_cap: int = DEFAULT_GENERATOR_CAP
    # largest dense residual (rows x columns) handed to the Smith step
    matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT
    thread_count: str = "auto"
    output: str = "json"

    def __post_init__(self):
        if self.generator_cap < 1 or self.matrix_entry_limit < 1:
            raise ConfigError("caps must be positive")
        if self.output not in ("json", "text"):
            raise ConfigError(f"output must be json or text, not {self.output!r}")
        if self.thread_count != "auto":
            try:
                ok = int(self.thread_count) >= 1
            except ValueError:
                ok = False
            if not ok:
                raise ConfigError("thread_count must be 'auto' or a positive integer")

    @property
    def threads(self) -> int:
        if self.thread_count == "auto":
            return os.cpu_count() or 1
        return int(self.thread_count)


def _coerce(name: str, value) -> object:
    if name in ("generator_cap", "matrix_entry_limit"):
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{name} must be an integer, got {value!r}") from None
    return str(value)


def load_config(path: str | None = None, env: dict | None = None, **overrides) -> Config:
    """Build a Config; later sources win.  Nothing is written anywhere."""
    values: dict = {}
    names = [f.name for f in fields(Config)]
    if path:
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        unknown = set(doc) - set(names)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update({k: _coerce(k, v) for k, v in doc.items()})
    env = os.environ if env is None else env
    for name in names:
        key = "WF_" + name.upper()
        if key in env:
            values[name] = _coerce(name, env[key])
    for name, v in overrides.items():
        if v is not None:
            values[name] = _coerce(name, v)
    return replace(Config(), **values)
