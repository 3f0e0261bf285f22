import abc
import argparse
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from rich.console import Console

from ..controls import BoundaryPoint, ControlPair, circle_control, integrate_flow, path_length
from ..core.config import RunConfig, load_run_config
from ..core.exceptions import ConfigurationError, InvalidArgument
from ..cycles import PolyLoop, cycle_upper_witness, decompose, loop_integral, signed_mass
from ..metric import (
    MetricContext,
    ball_volume_bracket,
    distance,
    distance_sqrt,
    reach_check,
    sample_cylinder,
)
from ..potentials import PotentialField, build_field
from ..stockyard import STRATEGIES, lambda_bracket, lambda_profile, optimize
from ..stockyard.bounds import DEFAULT_MC_SAMPLES
from ..ugs import fit_ugs
from .output import Emitter, parse_floats

console = Console(stderr=True)
logger = logging.getLogger("ccball.commands")


class BaseCommand(abc.ABC):
    """Classe de base pour toutes les sous-commandes ccball."""

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description

    def add_arguments(self, parser: argparse.ArgumentParser):
        """Options communes : configuration, graine et sortie."""
        parser.add_argument('--config', help='Run configuration (JSON, schema cc1)')
        parser.add_argument('--seed', type=int, help='Override the configured seed')
        parser.add_argument('--format', choices=['csv', 'json'], dest='output_format',
                            help='Override the configured output format')
        parser.add_argument('--output', '-o', help='Write results to this file instead of stdout')

    @abc.abstractmethod
    def execute(self, args: argparse.Namespace) -> int:
        """Exécute la commande. Retourne le code de sortie."""
        pass

    # Accès partagés

    def load_config(self, args: argparse.Namespace) -> RunConfig:
        return load_run_config(getattr(args, 'config', None))

    def seed(self, args: argparse.Namespace, config: RunConfig) -> int:
        return config.seed if getattr(args, 'seed', None) is None else args.seed

    def build_field(self, args: argparse.Namespace, config: RunConfig) -> PotentialField:
        base_dir = Path(args.config).resolve().parent if getattr(args, 'config', None) else None
        field = build_field(config.potential, config.numerics, base_dir)
        logger.info(f"{self.name}: using {field!r}")
        return field

    def emitter(self, args: argparse.Namespace, config: RunConfig) -> Emitter:
        output_format = getattr(args, 'output_format', None) or config.output_format
        path = getattr(args, 'output', None) or config.output
        return Emitter(output_format, path)

    def info(self, message: str):
        console.print(f"[blue]Info:[/blue] {message}")

    def warning(self, message: str):
        console.print(f"[yellow]Warning:[/yellow] {message}")


def parse_z(text: str, name: str = "--z0") -> complex:
    x, y = parse_floats(text, 2, name)
    return complex(x, y)


def parse_point(text: str, name: str) -> BoundaryPoint:
    x, y, t = parse_floats(text, 3, name)
    return BoundaryPoint.from_xyt(x, y, t)


def parse_deltas(text: str) -> List[float]:
    deltas = parse_floats(text, name="--deltas")
    if not deltas:
        raise InvalidArgument("--deltas needs at least one value")
    if any(d <= 0 for d in deltas):
        raise InvalidArgument(f"deltas must be positive, got '{text}'")
    return deltas


def read_json(path: str, what: str):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"{what} file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON in {what} file {path}: {e}")


def _add_search_options(parser: argparse.ArgumentParser):
    parser.add_argument('--strategy', choices=STRATEGIES, default='best', help='Stockyard strategy')
    parser.add_argument('--mc-samples', type=int, default=DEFAULT_MC_SAMPLES,
                        help=f'Random controls for the Monte Carlo bound (default: {DEFAULT_MC_SAMPLES}, 0 disables)')


def _metric_context(field: PotentialField, config: RunConfig, seed: int, args: argparse.Namespace) -> MetricContext:
    return MetricContext(field=field, delta0=config.delta0, budget=config.eval_budget, seed=seed,
                         strategy=args.strategy, mc_samples=args.mc_samples)


class LambdaCommand(BaseCommand):
    """Encadrements de Λ(p0, δ) sur une échelle de δ."""

    def __init__(self):
        super().__init__("lambda", "Bracket the global structure Lambda(p0, delta) over a delta ladder")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--z0', required=True, help='Base point x,y')
        parser.add_argument('--deltas', required=True, help='Comma-separated scales')
        parser.add_argument('--c2', type=float, help='Upper density constant (estimated if omitted)')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        seed = self.seed(args, config)
        profile = lambda_profile(field, parse_z(args.z0), parse_deltas(args.deltas), config.eval_budget, seed,
                                 args.c2, args.strategy, args.mc_samples)
        self.emitter(args, config).table(
            ["delta[z]", "lower[t]", "upper[t]", "c2[1]"],
            [(b.delta, b.lower, b.upper, b.c2) for b in profile],
        )
        return 0


class StockyardCommand(BaseCommand):
    """Meilleur stockyard trouvé et encadrement de Λ."""

    def __init__(self):
        super().__init__("stockyard", "Optimize a (z0, delta)-stockyard and print it as JSON")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--z0', required=True, help='Anchor x,y')
        parser.add_argument('--delta', type=float, required=True, help='Fencing budget')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        seed = self.seed(args, config)
        z0 = parse_z(args.z0)
        stockyard, found = optimize(field, z0, args.delta, args.strategy, config.eval_budget, seed)
        bracket = lambda_bracket(field, z0, args.delta, config.eval_budget, seed, None,
                                 args.strategy, args.mc_samples)
        document = stockyard.to_json(found)
        document["strategy"] = args.strategy
        document["bounds"] = {"lower": bracket.lower, "upper": bracket.upper, "c2": bracket.c2,
                              "mc_value": bracket.mc_value}
        self.emitter(args, config).document(document)
        return 0


class TwistCommand(BaseCommand):
    """Torsion et extrémité du flot d'un contrôle."""

    def __init__(self):
        super().__init__("twist", "Integrate a control and report its twist")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--z0', default='0,0', help='Base point x,y (default: 0,0)')
        parser.add_argument('--t0', type=float, default=0.0, help='Initial height t0')
        parser.add_argument('--delta', type=float, required=True, help='Scale delta')
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--control', help='Control file: JSON list of [s, alpha, beta]')
        source.add_argument('--circle', type=int, metavar='K', help='Regular K-gon circle control')
        parser.add_argument('--orientation', choices=['cw', 'ccw'], default='cw',
                            help='Orientation of --circle (default: cw)')

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        if args.circle is not None:
            u = circle_control(args.circle, args.orientation, config.numerics)
        else:
            u = ControlPair.from_json(read_json(args.control, "control"), numerics=config.numerics)
        z0 = parse_z(args.z0)
        end = integrate_flow(field, BoundaryPoint(z0, args.t0), args.delta, u)
        self.emitter(args, config).table(
            ["delta[z]", "twist[t]", "length[z]", "x_end[z]", "y_end[z]", "t_end[t]", "mean_zero[1]"],
            [(args.delta, end.t - args.t0, path_length(u, args.delta), end.x, end.y, end.t, u.mean_zero)],
        )
        return 0


class DecomposeCommand(BaseCommand):
    """Décomposition d'une boucle en cycles simples."""

    def __init__(self):
        super().__init__("decompose", "Split a closed polygonal loop into simple cycles with signed masses")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--loop', required=True, help='Loop file: JSON list of [x, y]')

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        loop = PolyLoop.from_json(read_json(args.loop, "loop"))
        cycles = decompose(loop, config.numerics)
        masses = [signed_mass(field, c) for c in cycles]
        document = {
            "loop_integral": loop_integral(field, loop),
            "mass_sum": sum(masses),
            "upper_witness": cycle_upper_witness(field, loop, config.numerics),
            "cycles": [dict(c.to_json(), signed_mass=m, area=c.area) for c, m in zip(cycles, masses)],
        }
        self.emitter(args, config).document(document)
        return 0


class UgsCheckCommand(BaseCommand):
    """Conditions de densité et ajustement de f(δ)."""

    def __init__(self):
        super().__init__("ugs-check", "Check the density conditions and fit f(delta) ~ delta^p")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--window', required=True, help='Window x0,y0,x1,y1')
        parser.add_argument('--delta0', type=float, help='Threshold delta0 (default: configured delta0)')
        parser.add_argument('--deltas', help='Scales to fit (default: delta0 x 1,2,4,8,16)')
        parser.add_argument('--grid-n', type=int, default=5, help='Sampling grid per axis (default: 5)')
        parser.add_argument('--z0-samples', type=int, default=5, help='Sampled base points (default: 5)')
        parser.add_argument('--table', help='Also write the f table as CSV to this file')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        window = tuple(parse_floats(args.window, 4, "--window"))
        delta0 = args.delta0 if args.delta0 is not None else config.delta0
        deltas = parse_deltas(args.deltas) if args.deltas else [delta0 * k for k in (1, 2, 4, 8, 16)]
        report = fit_ugs(field, window, deltas, config.eval_budget, self.seed(args, config),
                         args.grid_n, args.z0_samples, args.strategy, args.mc_samples)
        header = ["delta[z]", "lower[t]", "upper[t]"]
        emitter = self.emitter(args, config)
        if emitter.output_format == "json":
            emitter.document(report.to_json())
        else:
            emitter.table(header, report.f_table_rows())
        if args.table:
            Emitter("csv", args.table).table(header, report.f_table_rows())
        self.info(f"verdict: {report.verdict} (exponent={report.exponent})")
        return 0


class DistCommand(BaseCommand):
    """Estimation de d(p0, p1)."""

    def __init__(self):
        super().__init__("dist", "Estimate the CC distance between two boundary points")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--p0', required=True, help='First point x,y,t')
        parser.add_argument('--p1', required=True, help='Second point x,y,t')
        parser.add_argument('--sqrt', action='store_true', help='Use |dz| + sqrt|dt| (bounded Hessian only)')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        ctx = _metric_context(field, config, self.seed(args, config), args)
        p0, p1 = parse_point(args.p0, "--p0"), parse_point(args.p1, "--p1")
        d = distance_sqrt(ctx, p0, p1) if args.sqrt else distance(ctx, p0, p1)
        self.emitter(args, config).table(["distance[z]", "formula[1]"], [(d, "sqrt" if args.sqrt else "mu")])
        return 0


class CylCommand(BaseCommand):
    """Échantillons du cylindre et vérification d'atteignabilité."""

    def __init__(self):
        super().__init__("cyl", "Sample Cyl(p0, r*delta) and check reachability within budget delta")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--p0', required=True, help='Center point x,y,t')
        parser.add_argument('--delta', type=float, required=True, help='Ball radius delta (reach budget)')
        parser.add_argument('--samples', type=int, default=100, help='Number of samples (default: 100)')
        parser.add_argument('--ratio', type=float, default=0.5, help='Cylinder radius as a fraction of delta')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        if not 0 < args.ratio <= 1:
            raise InvalidArgument(f"--ratio must lie in (0, 1], got {args.ratio}")
        config = self.load_config(args)
        field = self.build_field(args, config)
        ctx = _metric_context(field, config, self.seed(args, config), args)
        p0 = parse_point(args.p0, "--p0")
        samples = sample_cylinder(ctx, p0, args.ratio * args.delta, args.samples, ctx.seed)
        rows = [(a, b, c, q.x, q.y, q.t, reach_check(ctx, p0, q, args.delta)) for a, b, c, q in samples]
        missed = sum(1 for r in rows if not r[-1])
        if missed:
            self.warning(f"{missed} of {len(rows)} cylinder points were not reached within budget {args.delta}")
        self.emitter(args, config).table(
            ["a[1]", "b[1]", "c[1]", "x[z]", "y[z]", "t[t]", "reached[1]"], rows)
        return 0


class VolumeCommand(BaseCommand):
    """Volumes |B_d(p0, δ)| ≈ δ² Λ(p0, δ)."""

    def __init__(self):
        super().__init__("volume", "Estimate CC ball volumes delta^2 * Lambda")

    def add_arguments(self, parser: argparse.ArgumentParser):
        super().add_arguments(parser)
        parser.add_argument('--z0', required=True, help='Base point x,y')
        parser.add_argument('--deltas', required=True, help='Comma-separated radii')
        parser.add_argument('--c2', type=float, help='Upper density constant (estimated if omitted)')
        _add_search_options(parser)

    def execute(self, args: argparse.Namespace) -> int:
        config = self.load_config(args)
        field = self.build_field(args, config)
        ctx = _metric_context(field, config, self.seed(args, config), args)
        z0 = parse_z(args.z0)
        rows: List[Tuple[float, float, float]] = []
        for delta in parse_deltas(args.deltas):
            lower, upper = ball_volume_bracket(ctx, z0, delta, args.c2)
            rows.append((delta, lower, upper))
        self.emitter(args, config).table(["delta[z]", "volume_lower[z^2*t]", "volume_upper[z^2*t]"], rows)
        return 0


class HealthcheckCommand(BaseCommand):
    """Auto-vérifications analytiques."""

    def __init__(self):
        super().__init__("healthcheck", "Run quick analytic self-checks")

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument('--json', action='store_true', help='Output results as JSON')
        parser.add_argument('--check', help='Run a single check by name')

    def execute(self, args: argparse.Namespace) -> int:
        from .healthcheck import run_healthcheck
        return run_healthcheck(as_json=args.json, check=args.check)


class CommandRegistry:
    """Registre des commandes disponibles."""

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}

    def register(self, command: BaseCommand):
        self._commands[command.name] = command
        logger.debug(f"Command registered: {command.name}")

    def get_command(self, name: str) -> Optional[BaseCommand]:
        return self._commands.get(name)

    def list_commands(self) -> List[BaseCommand]:
        return list(self._commands.values())

    def get_command_names(self) -> List[str]:
        return list(self._commands.keys())


command_registry = CommandRegistry()

for _command in (LambdaCommand(), StockyardCommand(), TwistCommand(), DecomposeCommand(), UgsCheckCommand(),
                 DistCommand(), CylCommand(), VolumeCommand(), HealthcheckCommand()):
    command_registry.register(_command)


def get_command_registry() -> CommandRegistry:
    """Retourne l'instance du registre de commandes."""
    return command_registry
