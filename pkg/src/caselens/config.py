"""Configuration loading.

All pattern tables, vocabularies, weights and thresholds live in one YAML
file. The packaged defaults are always loaded first; a user file passed via
``--config`` (or the CASELENS_CONFIG environment variable) is deep-merged on
top, so a config file only needs to contain the keys it overrides.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

ENV_VAR = "CASELENS_CONFIG"


def _deep_merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def default_config_text() -> str:
    return resources.files("caselens").joinpath("default_config.yaml").read_text("utf-8")


class Config:
    """Merged configuration with typed accessors for each pipeline stage."""

    def __init__(self, data: dict[str, Any]):
        self.data = data

    @property
    def org_patterns(self) -> list[tuple[str, str]]:
        return [(e["pattern"], e["name"]) for e in self.data.get("org_patterns", [])]

    @property
    def structured_patterns(self) -> dict[str, list[dict]]:
        return self.data["structured_patterns"]

    @property
    def semantic_patterns(self) -> dict[str, dict[str, list[str]]]:
        return self.data["semantic_patterns"]

    @property
    def severity_phrases(self) -> dict[str, str]:
        return self.data["severity_phrases"]

    @property
    def similarity_weights(self) -> dict[str, float]:
        return self.data["similarity"]["weights"]

    @property
    def similarity_threshold(self) -> float:
        return float(self.data["similarity"]["threshold"])

    @property
    def severe_markers(self) -> frozenset[str]:
        return frozenset(self.data["similarity"]["severe_markers"])

    @property
    def triage_weights(self) -> dict[str, float]:
        return self.data["triage"]["weights"]

    @property
    def triage_tables(self) -> dict[str, Any]:
        return self.data["triage"]

    @property
    def keyword_settings(self) -> dict[str, Any]:
        return self.data["keywords"]


def load_config(path: str | Path | None = None) -> Config:
    """Load the packaged defaults, then merge the user file on top.

    ``path=None`` falls back to CASELENS_CONFIG, then to defaults alone.
    """
    data = yaml.safe_load(default_config_text())
    if path is None:
        env = os.environ.get(ENV_VAR, "").strip()
        path = env or None
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            user = yaml.safe_load(fh) or {}
        if not isinstance(user, dict):
            raise ValueError(f"config file {path} must contain a mapping at the top level")
        data = _deep_merge(data, user)
    return Config(data)
