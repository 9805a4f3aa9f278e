"""Configuration handling for germforge."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

DEFAULT_CONFIG_NAME = "germforge_config.json"
BOUND_ENV = "GERMFORGE_BOUND"
DEFAULT_BOUND = 32
OUTPUT_FORMATS = ("text", "csv", "json")


class ConfigError(ValueError):
    """Raised when a configuration value is malformed."""


def _positive_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    try:
        number = int(str(value).strip())
    except ValueError as exc:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}") from exc
    if number < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return number


@dataclass
class EngineConfig:
    bound: int = DEFAULT_BOUND
    jobs: int = 1
    output_format: str = "text"
    quiet: bool = False

    def __post_init__(self) -> None:
        self.bound = _positive_int(self.bound, "bound")
        self.jobs = _positive_int(self.jobs, "jobs")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EngineConfig":
        unknown = set(data) - {"bound", "jobs", "output_format", "quiet"}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(
            bound=data.get("bound", DEFAULT_BOUND),
            jobs=data.get("jobs", 1),
            output_format=data.get("output_format", "text"),
            quiet=bool(data.get("quiet", False)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_config(path: Path | None = None) -> EngineConfig:
    config_path = Path(path or DEFAULT_CONFIG_NAME)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    with config_path.open("r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{config_path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{config_path}: expected a JSON object")
    return EngineConfig.from_dict(raw)


def save_config(config: EngineConfig, path: Path | None = None) -> Path:
    config_path = Path(path or DEFAULT_CONFIG_NAME)
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with config_path.open("w", encoding="utf-8") as handle:
        json.dump(config.to_dict(), handle, indent=2)
    return config_path


def resolve_bound(
    flag: Optional[int],
    config: Optional[EngineConfig] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> int:
    """--bound, then GERMFORGE_BOUND, then the config file, then 32."""
    if flag is not None:
        return _positive_int(flag, "--bound")
    environ = os.environ if environ is None else environ
    if environ.get(BOUND_ENV):
        return _positive_int(environ[BOUND_ENV], BOUND_ENV)
    if config is not None:
        return config.bound
    return DEFAULT_BOUND
