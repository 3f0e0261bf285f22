"""
Configuration d'exécution (RunConfig) et réglages numériques partagés.
"""

import json
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from .exceptions import ConfigurationError, UnknownConfigKey

logger = logging.getLogger("ccball.config")

SCHEMA_VERSION = "cc1"
OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class NumericSettings:
    """Tolérances et plafonds numériques utilisés par tous les modules."""

    quad_rel_tol: float = 1e-8
    quad_limit: int = 200
    area_abs_tol: float = 1e-8
    area_rel_tol: float = 1e-6
    max_evaluations: int = 10_000_000
    fd_step_factor: float = 1e-4
    max_derivative_order: int = 6
    jitter_attempts: int = 3
    eps_gp_factor: float = 1e-9
    eps_conn_factor: float = 1e-6
    connector_width_factor: float = 1e-4
    scan_grid: int = 32
    scan_octaves: int = 3
    refine_top: int = 5
    speed_margin: float = 1e-9
    mean_zero_tol: float = 1e-12

    def fd_step(self, z: complex) -> float:
        """Pas de différences finies h_fd = facteur × (1 + |z|)."""
        return self.fd_step_factor * (1.0 + abs(z))

    def area_tolerance(self, total: float) -> float:
        return max(self.area_abs_tol, self.area_rel_tol * abs(total))


DEFAULT_NUMERICS = NumericSettings()


@dataclass(frozen=True)
class RunConfig:
    """Configuration partagée par toutes les sous-commandes."""

    potential: Dict[str, Any] = field(default_factory=lambda: {"kind": "quadratic", "c": 1.0})
    delta0: float = 1.0
    seed: int = 0
    eval_budget: int = 1_000_000
    output_format: str = "csv"
    output: Optional[str] = None
    schema: str = SCHEMA_VERSION
    numerics: NumericSettings = DEFAULT_NUMERICS

    def __post_init__(self):
        if self.schema != SCHEMA_VERSION:
            raise ConfigurationError(f"unsupported schema '{self.schema}', expected '{SCHEMA_VERSION}'")
        if not isinstance(self.potential, dict) or "kind" not in self.potential:
            raise ConfigurationError("'potential' must be an object with a 'kind'")
        if not self.delta0 > 0:
            raise ConfigurationError(f"delta0 must be positive, got {self.delta0}")
        if self.eval_budget < 1:
            raise ConfigurationError(f"eval_budget must be >= 1, got {self.eval_budget}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, got '{self.output_format}'"
            )


def _check_type(key: str, value: Any, expected: type) -> Any:
    if expected is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if expected is int and isinstance(value, bool):
        raise ConfigurationError(f"'{key}' must be an integer")
    if not isinstance(value, expected):
        raise ConfigurationError(f"'{key}' must be of type {expected.__name__}")
    return value


def parse_numerics(data: Dict[str, Any]) -> NumericSettings:
    """Construit des NumericSettings en rejetant toute clé inconnue."""
    known = {f.name: f for f in fields(NumericSettings)}
    values = {}
    for key, value in data.items():
        if key not in known:
            raise UnknownConfigKey(key, "numerics")
        expected = int if isinstance(getattr(DEFAULT_NUMERICS, key), int) else float
        values[key] = _check_type(f"numerics.{key}", value, expected)
    return replace(DEFAULT_NUMERICS, **values)


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    Valide un dictionnaire de configuration et construit un RunConfig.

    Args:
        data: Contenu JSON déjà décodé

    Returns:
        RunConfig validé

    Raises:
        UnknownConfigKey: Si une clé n'appartient pas au schéma
        ConfigurationError: Si un type ou une valeur est invalide
    """
    if not isinstance(data, dict):
        raise ConfigurationError("configuration root must be a JSON object")

    types = {
        "potential": dict,
        "delta0": float,
        "seed": int,
        "eval_budget": int,
        "output_format": str,
        "output": str,
        "schema": str,
    }
    values: Dict[str, Any] = {}
    for key, value in data.items():
        if key == "numerics":
            values["numerics"] = parse_numerics(_check_type("numerics", value, dict))
            continue
        if key not in types:
            raise UnknownConfigKey(key)
        if key == "output" and value is None:
            values[key] = None
            continue
        values[key] = _check_type(key, value, types[key])

    return RunConfig(**values)


def load_run_config(path: Optional[str]) -> RunConfig:
    """Charge un fichier de configuration JSON (défauts si path est None)."""
    if path is None:
        logger.debug("No configuration file given, using defaults")
        return RunConfig()

    config_path = Path(path)
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"configuration file not found: {config_path}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON in {config_path}: {e}")

    config = parse_run_config(data)
    logger.info(f"Configuration loaded from {config_path} (potential kind={config.potential.get('kind')})")
    return config
