"""Session configuration: the one knob surface for the whole engine.

A SessionConfig nests the classifier, filter, and game configs and adds the
runtime options (address, mirroring, tracing). It loads from a YAML file
whose sections mirror the dataclass layout; unknown keys are rejected so a
typo'd option fails loudly instead of silently using a default.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Optional

import yaml

from .classifier import ClassifierConfig
from .filtering import FilterConfig
from .game import GameConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SessionConfig:
    listen_address: str = "127.0.0.1:8765"
    mirror_input: bool = True           # selfie-view flip so a rightward tilt maps to +x
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    game: GameConfig = field(default_factory=GameConfig)
    snapshot_decimation: int = 1        # send every k-th tick's snapshot
    trace_out: Optional[str] = None
    headless: bool = False              # run the loop with no client attached
    malformed_frame_limit: int = 100    # consecutive bad lines before disconnect

    def validate(self) -> None:
        if self.snapshot_decimation < 1:
            raise ConfigError("snapshot_decimation must be >= 1")
        if self.malformed_frame_limit < 1:
            raise ConfigError("malformed_frame_limit must be >= 1")
        host, port = split_address(self.listen_address)
        if not host:
            raise ConfigError(f"listen_address needs a host: {self.listen_address!r}")
        try:
            self.classifier.validate()
            self.filter.validate()
            self.game.validate()
        except ValueError as e:
            raise ConfigError(str(e)) from e


def split_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep:
        raise ConfigError(f"listen_address must be host:port, got {address!r}")
    try:
        port_num = int(port)
    except ValueError:
        raise ConfigError(f"port must be an integer, got {port!r}") from None
    if not (0 <= port_num <= 65535):
        raise ConfigError(f"port out of range: {port_num}")
    return host, port_num


_SECTION_TYPES = {
    "classifier": ClassifierConfig,
    "filter": FilterConfig,
    "game": GameConfig,
}


def _build_section(cls, data: Any, section: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be a mapping")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as e:
        raise ConfigError(f"bad section {section!r}: {e}") from e


def config_from_dict(data: dict) -> SessionConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    top_fields = {f.name for f in dataclasses.fields(SessionConfig)}
    unknown = set(data) - top_fields
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key in _SECTION_TYPES:
            kwargs[key] = _build_section(_SECTION_TYPES[key], value, key)
        else:
            kwargs[key] = value
    try:
        cfg = SessionConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(str(e)) from e
    cfg.validate()
    return cfg


def load_config(path: str) -> SessionConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML in {path!r}: {e}") from e
    if data is None:
        data = {}
    return config_from_dict(data)


def config_to_dict(cfg: SessionConfig) -> dict:
    """Plain-dict form, used for the self-describing trace header."""
    return dataclasses.asdict(cfg)
