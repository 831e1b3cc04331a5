"""Configuration system with YAML loading and profile merging."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from edpn.core.constants import (
    CONFIG_DIR,
    CONFLICT_POLICIES,
    DEFAULT_MAX_FIRINGS,
    DEFAULT_STATE_BUDGET,
    DEFAULT_STEP_BUDGET,
    EVENT_LIFETIMES,
    STEP_BUDGET_ENV,
)
from edpn.core.exceptions import ConfigError

logger = logging.getLogger(__name__)


def deep_merge(base: dict, override: dict) -> dict:
    """Recursively merge override into base."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    return result


@dataclass
class SimulationConfig:
    step_budget: int = DEFAULT_STEP_BUDGET
    event_lifetime: str = "step"
    policy: str = "lexicographic"
    safe: bool = True


@dataclass
class GenerationConfig:
    max_firings: int = DEFAULT_MAX_FIRINGS
    state_budget: int = DEFAULT_STATE_BUDGET
    restart_from_stable: bool = True


@dataclass
class AppConfig:
    profile: str = "standard"
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    logging: dict = field(default_factory=dict)

    @classmethod
    def load(
        cls,
        config_path: Optional[str] = None,
        profile: Optional[str] = None,
    ) -> "AppConfig":
        """Load config from YAML, apply profile overlay and environment overrides."""
        default_path = CONFIG_DIR / "default.yaml"
        config_data: dict[str, Any] = {}
        if default_path.exists():
            config_data = _read_yaml(default_path)
        else:
            logger.debug(f"Default config not found at {default_path}; using built-in defaults")

        # Apply profile overlay
        profile_name = profile or config_data.get("profile", "standard")
        config_data["profile"] = profile_name
        profile_path = CONFIG_DIR / "profiles" / f"{profile_name}.yaml"
        if profile_path.exists():
            config_data = deep_merge(config_data, _read_yaml(profile_path))
        elif profile:
            raise ConfigError(f"Profile not found: {profile_name}")

        # Apply user override
        if config_path:
            user_path = Path(config_path)
            if not user_path.exists():
                raise ConfigError(f"User config not found: {user_path}")
            config_data = deep_merge(config_data, _read_yaml(user_path))

        budget = os.environ.get(STEP_BUDGET_ENV)
        if budget:
            try:
                step_budget = int(budget)
            except ValueError:
                raise ConfigError(f"{STEP_BUDGET_ENV} must be an integer, got {budget!r}")
            config_data = deep_merge(config_data, {"simulation": {"step_budget": step_budget}})

        return cls._from_dict(config_data)

    @classmethod
    def _from_dict(cls, data: dict[str, Any]) -> "AppConfig":
        sim_data = data.get("simulation", {}) or {}
        gen_data = data.get("generation", {}) or {}

        config = cls(
            profile=data.get("profile", "standard"),
            simulation=SimulationConfig(**{
                k: v for k, v in sim_data.items()
                if k in SimulationConfig.__dataclass_fields__
            }),
            generation=GenerationConfig(**{
                k: v for k, v in gen_data.items()
                if k in GenerationConfig.__dataclass_fields__
            }),
            logging=data.get("logging", {}) or {},
        )
        config.validate()
        return config

    def validate(self) -> None:
        sim = self.simulation
        if sim.event_lifetime not in EVENT_LIFETIMES:
            raise ConfigError(f"event_lifetime must be one of {EVENT_LIFETIMES}, got {sim.event_lifetime!r}")
        if sim.policy not in CONFLICT_POLICIES:
            raise ConfigError(f"policy must be one of {CONFLICT_POLICIES}, got {sim.policy!r}")
        if sim.step_budget < 1:
            raise ConfigError("step_budget must be at least 1")
        if self.generation.max_firings < 1:
            raise ConfigError("max_firings must be at least 1")
        if self.generation.state_budget < 1:
            raise ConfigError("state_budget must be at least 1")


def _read_yaml(path: Path) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}")
