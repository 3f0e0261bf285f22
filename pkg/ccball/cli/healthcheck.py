"""
Système de healthcheck pour ccball.
Vérifie l'environnement, le registre des potentiels et quelques identités
analytiques rapides.
"""

import argparse
import json
import logging
import math
import os
import sys
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

from rich.console import Console
from rich.table import Table

logger = logging.getLogger("ccball.healthcheck")

STATUS_STYLES = {"healthy": "green", "warning": "yellow", "error": "red", "unknown": "white"}
REQUIRED_PACKAGES = ("numpy", "scipy", "shapely", "networkx", "rich")


def _new_result() -> Dict[str, Any]:
    return {"status": "healthy", "details": {}, "warnings": [], "errors": []}


def _close(result: Dict[str, Any]) -> Dict[str, Any]:
    if result["errors"]:
        result["status"] = "error"
    elif result["warnings"]:
        result["status"] = "warning"
    return result


class CCBallHealthCheck:
    """Classe principale pour effectuer les vérifications de santé."""

    def __init__(self):
        self.results: Dict[str, Any] = {}

    @property
    def checks(self) -> Dict[str, Callable[[], Dict[str, Any]]]:
        return {
            "environment": self._check_environment,
            "potentials": self._check_potentials,
            "quadratic_lambda": self._check_quadratic_lambda,
            "circle_twist": self._check_circle_twist,
            "green_identity": self._check_green_identity,
            "disc_bracket": self._check_disc_bracket,
        }

    def run(self, names: Optional[List[str]] = None) -> Dict[str, Any]:
        """
        Effectue les vérifications demandées (toutes par défaut).

        Returns:
            Dictionnaire complet des résultats
        """
        self.results = {"timestamp": datetime.now().isoformat(), "overall_status": "unknown", "checks": {}}
        for name in names or list(self.checks):
            try:
                logger.info(f"Running {name} check...")
                self.results["checks"][name] = self.checks[name]()
            except Exception as e:
                logger.error(f"Error during {name} check: {e}")
                self.results["checks"][name] = {"status": "error", "details": {}, "warnings": [], "errors": [str(e)]}
        self._determine_overall_status()
        logger.info(f"Health check completed. Overall status: {self.results['overall_status']}")
        return self.results

    def _check_environment(self) -> Dict[str, Any]:
        result = _new_result()
        result["details"]["python_version"] = ".".join(str(v) for v in sys.version_info[:3])
        if sys.version_info < (3, 8):
            result["errors"].append("Python 3.8+ is required")
        for package in REQUIRED_PACKAGES:
            try:
                module = __import__(package)
                result["details"][package] = getattr(module, "__version__", "unknown")
            except ImportError as e:
                result["errors"].append(f"Cannot import {package}: {e}")
        try:
            import shapely
            if int(shapely.__version__.split(".")[0]) < 2:
                result["warnings"].append(f"shapely {shapely.__version__} found, 2.x expected")
        except (ImportError, ValueError):
            pass

        from ..core.logging import default_home
        home = default_home()
        result["details"]["home"] = str(home)
        if home.exists() and not os.access(home, os.W_OK):
            result["warnings"].append(f"{home} is not writable; logs cannot be stored")
        return _close(result)

    def _check_potentials(self) -> Dict[str, Any]:
        result = _new_result()
        from ..potentials import get_registry

        registry = get_registry()
        result["details"]["kinds"] = registry.list_kinds()
        for message in registry.discovery_errors:
            result["warnings"].append(message)
        for kind in ("quadratic", "disc_array", "density_grid"):
            if kind not in registry.list_kinds():
                result["errors"].append(f"potential kind '{kind}' is not registered")
        return _close(result)

    def _check_quadratic_lambda(self) -> Dict[str, Any]:
        result = _new_result()
        from ..potentials import QuadraticField
        from ..stockyard import optimize

        _, found = optimize(QuadraticField(), 0j, math.pi, "single_circle")
        ratio = found / math.pi
        result["details"]["lambda_over_expected"] = ratio
        if not 0.98 <= ratio <= 1.001:
            result["errors"].append(f"Lambda(0, pi) = {found:.6g}, expected pi")
        return _close(result)

    def _check_circle_twist(self) -> Dict[str, Any]:
        result = _new_result()
        from ..controls import circle_control, twist
        from ..potentials import QuadraticField

        value = twist(QuadraticField(), 0j, 2.0 * math.pi, circle_control(256, "cw"))
        result["details"]["twist"] = value
        error = abs(value - 4.0 * math.pi) / (4.0 * math.pi)
        if error > 0.01:
            result["errors"].append(f"circle twist {value:.6g} deviates from 4*pi by {error:.2%}")
        elif error > 1e-3:
            result["warnings"].append(f"circle twist deviates from 4*pi by {error:.2%}")
        return _close(result)

    def _check_green_identity(self) -> Dict[str, Any]:
        result = _new_result()
        from ..cycles import PolyLoop, decompose, loop_integral, signed_mass
        from ..potentials import QuadraticField

        field = QuadraticField()
        bowtie = PolyLoop.from_points([-1 + 1j, 1 - 1j, 1 + 1j, -1 - 1j])
        cycles = decompose(bowtie)
        total = sum(signed_mass(field, c) for c in cycles)
        integral = loop_integral(field, bowtie)
        result["details"].update({"cycles": len(cycles), "loop_integral": integral, "mass_sum": total})
        if abs(total - integral) > 1e-6 * max(1.0, abs(integral)):
            result["errors"].append(f"cycle masses {total:.9g} differ from the loop integral {integral:.9g}")
        return _close(result)

    def _check_disc_bracket(self) -> Dict[str, Any]:
        result = _new_result()
        from ..potentials import DiscArrayField
        from ..stockyard import optimize

        field = DiscArrayField()
        _, found = optimize(field, field.center(1), 30.0, "disc_chain", eval_budget=20_000)
        result["details"]["disc_chain_value"] = found
        if found < 4.0:
            result["errors"].append(f"disc chain value {found:.6g} at delta=30 is below 4")
        return _close(result)

    def _determine_overall_status(self):
        statuses = [c.get("status", "unknown") for c in self.results["checks"].values()]
        errors, warnings = statuses.count("error"), statuses.count("warning")
        if errors:
            self.results["overall_status"] = "error"
        elif warnings:
            self.results["overall_status"] = "warning"
        else:
            self.results["overall_status"] = "healthy"
        self.results["summary"] = {
            "total_checks": len(statuses),
            "errors": errors,
            "warnings": warnings,
            "healthy": len(statuses) - errors - warnings,
        }

    def print_summary(self, console: Optional[Console] = None):
        """Affiche un résumé des résultats."""
        console = console or Console()
        overall = self.results.get("overall_status", "unknown")
        table = Table(title=f"ccball health check: [{STATUS_STYLES[overall]}]{overall.upper()}[/]")
        table.add_column("Check", style="cyan")
        table.add_column("Status")
        table.add_column("Notes")
        for name, check in self.results.get("checks", {}).items():
            status = check.get("status", "unknown")
            notes = "; ".join(check.get("errors", []) + check.get("warnings", []))
            table.add_row(name.replace("_", " "), f"[{STATUS_STYLES.get(status, 'white')}]{status}[/]", notes)
        console.print(table)


def run_healthcheck(as_json: bool = False, check: Optional[str] = None) -> int:
    """Exécute le healthcheck ; 0 si aucune erreur, 3 sinon."""
    from ..core.exceptions import InvalidArgument

    health_check = CCBallHealthCheck()
    if check is not None and check not in health_check.checks:
        raise InvalidArgument(f"unknown check '{check}', expected one of {', '.join(health_check.checks)}")
    results = health_check.run([check] if check else None)
    if as_json:
        print(json.dumps(results, indent=2, default=str))
    else:
        health_check.print_summary()
    return 3 if results["overall_status"] == "error" else 0


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée autonome du healthcheck."""
    parser = argparse.ArgumentParser(description="ccball health check")
    parser.add_argument("--json", action="store_true", help="Output results as JSON")
    parser.add_argument("--check", choices=list(CCBallHealthCheck().checks), help="Run a specific check only")
    args = parser.parse_args(argv)
    return run_healthcheck(as_json=args.json, check=args.check)


if __name__ == "__main__":
    sys.exit(main())
