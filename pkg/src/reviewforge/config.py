"""Application configuration: one JSON file plus REVIEWFORGE_* env overrides.

Env keys map section and field, e.g. REVIEWFORGE_INGEST_ALPHA=0.7 or
REVIEWFORGE_SERVICE_PORT=9000. Values are coerced to the field's current type.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = "REVIEWFORGE_"


@dataclass
class IngestConfig:
    alpha: float = 0.5
    window: int = 3
    min_cluster: int = 4
    max_depth: int = 3
    dpi: int = 144
    target_width: int = 1024
    separator_height: int = 8
    token_budget: int = 2000


@dataclass
class RetrievalConfig:
    k: int = 2
    dimension: int = 4096
    max_aspects: int = 8


@dataclass
class LlmConfig:
    provider: str = "offline"  # offline | http | mock
    endpoint: str = "http://localhost:8080/v1/chat/completions"
    model: str = "local-multimodal"
    temperature: float = 0.2
    max_output_tokens: int = 2048
    timeout_s: float = 60.0
    max_retries: int = 3
    credential_env: str = "REVIEWFORGE_API_KEY"


@dataclass
class PromptConfig:
    lambda1: float = 0.5
    lambda2: float = 0.5
    assets_dir: str = ""


@dataclass
class ServiceConfig:
    data_dir: str = "./data"
    max_upload_mb: int = 50
    host: str = "127.0.0.1"
    port: int = 8000
    static_dir: str = ""
    venues: tuple[str, ...] = ("default",)


@dataclass
class AppConfig:
    ingest: IngestConfig = field(default_factory=IngestConfig)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    llm: LlmConfig = field(default_factory=LlmConfig)
    prompt: PromptConfig = field(default_factory=PromptConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)


def _coerce(value: str, current: Any) -> Any:
    if isinstance(current, bool):
        return value.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(current, int):
        return int(value)
    if isinstance(current, float):
        return float(value)
    if isinstance(current, tuple):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    return value


def _apply_mapping(section: Any, values: Mapping[str, Any]) -> None:
    for f in dataclasses.fields(section):
        if f.name in values:
            value = values[f.name]
            if isinstance(getattr(section, f.name), tuple) and isinstance(value, list):
                value = tuple(value)
            setattr(section, f.name, value)


def load_config(path: Optional[str | Path] = None, env: Optional[Mapping[str, str]] = None) -> AppConfig:
    """Build an AppConfig from defaults, an optional JSON file, then env vars."""
    config = AppConfig()
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError("config file must contain a JSON object")
        for section_name, values in raw.items():
            section = getattr(config, section_name, None)
            if section is None or not isinstance(values, dict):
                logger.warning("ignoring unknown config section %r", section_name)
                continue
            _apply_mapping(section, values)

    env = env if env is not None else os.environ
    for section_field in dataclasses.fields(config):
        section = getattr(config, section_field.name)
        for f in dataclasses.fields(section):
            key = f"{ENV_PREFIX}{section_field.name.upper()}_{f.name.upper()}"
            if key in env:
                try:
                    setattr(section, f.name, _coerce(env[key], getattr(section, f.name)))
                except ValueError:
                    raise ValueError(f"bad value for {key}: {env[key]!r}")
    return config
