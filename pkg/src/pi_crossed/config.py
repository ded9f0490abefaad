# pi_crossed/config.py
from __future__ import annotations
"""Async configuration loader and the validated suite configuration.

The YAML (or JSON) file is read with ``aiofiles`` and merged recursively onto
:data:`DEFAULT_CONFIG`; the merged dictionary is then validated into a
:class:`SuiteConfig`.
"""

import copy
import logging
import os
from typing import Any, Dict, Optional, Union

import aiofiles
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from pi_crossed.linalg import Tolerance
from pi_crossed.spaces import SemigroupElement, SemigroupError, parse_element

__all__ = [
    "ConfigError",
    "DEFAULT_CONFIG",
    "LoggingConfig",
    "SuiteConfig",
    "load_config",
    "build_suite_config",
    "build_logging_config",
]

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Malformed configuration file or invalid configuration values."""


# ---------------------------------------------------------------------------
# Default configuration (merged with YAML on disk)
# ---------------------------------------------------------------------------

DEFAULT_CONFIG: Dict[str, Any] = {
    "suites": ["all"],
    "cutoff": 40,
    "gridN": 24,
    "generators": [1],
    "seed": 0,
    "outPath": "report.json",
    "tolerances": {
        "eqTol": 1e-10,
        "rankTol": 1e-8,
    },
    "injectPerturbation": False,
    "logging": {
        "level": "info",
        "file": None,
        "verbose_modules": [],
        "quiet_modules": {},
    },
}


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

class LoggingConfig(BaseModel):
    level: str = "info"
    file: Optional[str] = None
    verbose_modules: list[str] = Field(default_factory=list)
    quiet_modules: Dict[str, str] = Field(default_factory=dict)


ElementSpec = Union[int, list[int]]


class SuiteConfig(BaseModel):
    """Validated run configuration."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    suites: list[str] = Field(default_factory=lambda: ["all"])
    cutoff: ElementSpec = 40
    grid_n: int = Field(default=24, alias="gridN", ge=8)
    generators: list[ElementSpec] = Field(default_factory=lambda: [1])
    seed: int = 0
    out_path: str = Field(default="report.json", alias="outPath")
    tolerances: Tolerance = Field(default_factory=Tolerance)
    inject_perturbation: bool = Field(default=False, alias="injectPerturbation")
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("suites", mode="before")
    @classmethod
    def _split_suites(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = [s.strip() for s in value.split(",") if s.strip()]
        if not value:
            raise ValueError("at least one suite name is required")
        return value

    @field_validator("cutoff")
    @classmethod
    def _check_cutoff(cls, value: ElementSpec) -> ElementSpec:
        try:
            element = parse_element(value)
        except SemigroupError as exc:
            raise ValueError(str(exc)) from exc
        if element < 4:
            raise ValueError("cutoff must be at least 4")
        return value

    @field_validator("generators")
    @classmethod
    def _check_generators(cls, value: list[ElementSpec]) -> list[ElementSpec]:
        if not value:
            raise ValueError("generator list is empty")
        for g in value:
            try:
                if not parse_element(g):
                    raise ValueError("generators must be strictly positive")
            except SemigroupError as exc:
                raise ValueError(str(exc)) from exc
        return value

    @property
    def cutoff_element(self) -> SemigroupElement:
        return parse_element(self.cutoff)

    @property
    def generator_elements(self) -> tuple[SemigroupElement, ...]:
        return tuple(parse_element(g) for g in self.generators)


# ---------------------------------------------------------------------------
# Public helpers
# ---------------------------------------------------------------------------

async def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Return the merged configuration dictionary.

    Deep-copies :data:`DEFAULT_CONFIG`, then (optionally) loads a YAML file
    and merges it into the copy recursively.  Missing file → defaults;
    unparsable file → :class:`ConfigError`.
    """
    config: Dict[str, Any] = copy.deepcopy(DEFAULT_CONFIG)

    if config_path and os.path.exists(config_path):
        async with aiofiles.open(config_path, "r", encoding="utf-8") as f:
            raw = await f.read()
        try:
            user_cfg = yaml.safe_load(raw) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {config_path}: {exc}") from exc
        if not isinstance(user_cfg, dict):
            raise ConfigError(f"{config_path} must contain a mapping at top level")
        _deep_update(config, user_cfg)
        logger.debug("Loaded configuration from %s", config_path)
    elif config_path:
        logger.warning("Config file %s not found; using defaults", config_path)

    return config


def build_suite_config(raw: Dict[str, Any]) -> SuiteConfig:
    """Validate a merged dictionary, mapping validation errors to :class:`ConfigError`."""
    try:
        return SuiteConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def build_logging_config(raw: Dict[str, Any]) -> LoggingConfig:
    """Validate only the ``logging`` section; logging is set up before the rest is checked."""
    try:
        return LoggingConfig.model_validate(raw.get("logging") or {})
    except ValidationError as exc:
        raise ConfigError(f"logging: {exc}") from exc


# ---------------------------------------------------------------------------
# Internal utils
# ---------------------------------------------------------------------------

def _deep_update(target: Dict[str, Any], source: Dict[str, Any]) -> None:
    """Recursively merge *source* into *target* (in-place)."""
    for key, value in source.items():
        if key in target and isinstance(target[key], dict) and isinstance(value, dict):
            _deep_update(target[key], value)
        else:
            target[key] = value
