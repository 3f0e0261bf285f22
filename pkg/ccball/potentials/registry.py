"""
Registre des types de potentiel, découverts via leur config.json.
"""

import importlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidPotentialSpec, UnknownConfigKey
from .base import PotentialField

logger = logging.getLogger("ccball.potentials.registry")


class PotentialRegistry:
    """Registre pour découvrir les types de potentiel et construire des champs."""

    def __init__(self, base_path: Optional[Path] = None):
        self.base_path = Path(base_path) if base_path else Path(__file__).parent
        self.kinds: Dict[str, Dict[str, Any]] = {}
        self.discovery_errors: List[str] = []
        self._discover_kinds()

    def _discover_kinds(self):
        """Parcourt les sous-répertoires à la recherche d'un config.json."""
        self.discovery_errors.clear()
        for item in sorted(self.base_path.iterdir()):
            if not item.is_dir() or item.name.startswith('__'):
                continue
            config_file = item / "config.json"
            if not config_file.exists():
                continue
            try:
                with open(config_file, 'r', encoding='utf-8') as f:
                    config = json.load(f)
            except json.JSONDecodeError as e:
                error_msg = f"Invalid JSON in {config_file}: {e}"
                logger.error(error_msg)
                self.discovery_errors.append(error_msg)
                continue

            kind = config.get("id")
            if kind != item.name:
                error_msg = f"Potential id '{kind}' does not match directory {item.name}"
                logger.error(error_msg)
                self.discovery_errors.append(error_msg)
                continue

            config["module"] = f"{__package__}.{item.name}.field"
            self.kinds[kind] = config
            logger.debug(f"Potential kind discovered: {kind} ({config.get('name', kind)})")

    def list_kinds(self) -> List[str]:
        return sorted(self.kinds)

    def get_kind_config(self, kind: str) -> Optional[Dict[str, Any]]:
        return self.kinds.get(kind)

    def validate(self, spec: Dict[str, Any], base_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
        """
        Valide une spécification de potentiel contre les paramètres déclarés.

        Args:
            spec: Dictionnaire {"kind": ..., <paramètres>}
            base_dir: Répertoire de résolution des chemins relatifs

        Returns:
            Paramètres complétés par les valeurs par défaut

        Raises:
            InvalidPotentialSpec: Type inconnu, paramètre manquant ou mal typé
            UnknownConfigKey: Paramètre non déclaré
        """
        if not isinstance(spec, dict):
            raise InvalidPotentialSpec("potential spec must be a JSON object")
        kind = spec.get("kind")
        config = self.kinds.get(kind)
        if config is None:
            raise InvalidPotentialSpec(
                f"unknown potential kind '{kind}', expected one of {', '.join(self.list_kinds())}"
            )

        declared = config.get("parameters", {})
        for key in spec:
            if key != "kind" and key not in declared:
                raise UnknownConfigKey(key, f"potential '{kind}'")

        params: Dict[str, Any] = {}
        for name, schema in declared.items():
            if name in spec:
                params[name] = self._coerce(kind, name, schema, spec[name], base_dir)
            elif schema.get("required", False):
                raise InvalidPotentialSpec(f"potential '{kind}' requires parameter '{name}'")
            else:
                params[name] = schema.get("default")
        return params

    @staticmethod
    def _coerce(kind: str, name: str, schema: Dict[str, Any], value: Any,
                base_dir: Optional[Union[str, Path]]) -> Any:
        expected = schema.get("type", "number")
        where = f"potential '{kind}' parameter '{name}'"
        if expected == "number":
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidPotentialSpec(f"{where} must be a finite number")
            return float(value)
        if expected == "integer":
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidPotentialSpec(f"{where} must be an integer")
            return value
        if expected == "window":
            if (not isinstance(value, (list, tuple)) or len(value) != 4
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
                raise InvalidPotentialSpec(f"{where} must be [x0, y0, x1, y1]")
            return [float(v) for v in value]
        if expected == "path":
            if not isinstance(value, str):
                raise InvalidPotentialSpec(f"{where} must be a string path")
            path = Path(value)
            if not path.is_absolute() and base_dir is not None:
                path = Path(base_dir) / path
            return str(path)
        raise InvalidPotentialSpec(f"{where} has unsupported schema type '{expected}'")

    def build(self, spec: Dict[str, Any], numerics: NumericSettings = DEFAULT_NUMERICS,
              base_dir: Optional[Union[str, Path]] = None) -> PotentialField:
        """Construit un champ à partir d'une spécification validée."""
        params = self.validate(spec, base_dir)
        config = self.kinds[spec["kind"]]
        module = importlib.import_module(config["module"])
        field_cls = getattr(module, config["class"])
        field = field_cls.from_config(params, numerics)
        logger.info(f"Potential built: {field!r}")
        return field


_registry: Optional[PotentialRegistry] = None


def get_registry() -> PotentialRegistry:
    """Instance globale du registre (découverte paresseuse)."""
    global _registry
    if _registry is None:
        _registry = PotentialRegistry()
    return _registry


def build_field(spec: Dict[str, Any], numerics: NumericSettings = DEFAULT_NUMERICS,
                base_dir: Optional[Union[str, Path]] = None) -> PotentialField:
    return get_registry().build(spec, numerics, base_dir)
