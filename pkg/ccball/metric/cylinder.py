"""
Application cylindre Ψ_{p0,δ}(a, b, c) = exp(aδX + bδY + c f(δ) ∂t)(p0)
et vérification constructive d'atteignabilité.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..controls.control_pair import BoundaryPoint
from ..core.exceptions import InvalidArgument, OutOfCylinder
from .context import MetricContext

logger = logging.getLogger("ccball.metric")

JACOBIAN_STEP = 1e-4
LOOP_SIDES = 512
MAX_LOOPS = 4
LOOP_DIRECTIONS = 8
REACH_TOL = 1e-6
BISECTION_STEPS = 200


def _check_scale(delta: float, f_delta: float):
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidArgument(f"delta must be positive and finite, got {delta}")
    if not (f_delta >= 0 and math.isfinite(f_delta)):
        raise InvalidArgument(f"f_delta must be finite and nonnegative, got {f_delta}")


def _psi(ctx: MetricContext, p0: BoundaryPoint, delta: float, f_delta: float,
         a: float, b: float, c: float) -> BoundaryPoint:
    z1 = p0.z + delta * complex(a, -b)
    return BoundaryPoint(z1, p0.t + c * f_delta + ctx.field.segment_twist(p0.z, z1))


def cylinder_point(ctx: MetricContext, p0: BoundaryPoint, delta: float, f_delta: float,
                   a: float, b: float, c: float) -> BoundaryPoint:
    """
    Ψ_{p0,δ}(a, b, c) : segment plan (x0 + aδ, y0 − bδ), puis
    t = t0 + c·f_δ + torsion du contrôle constant (a, b).

    Raises:
        OutOfCylinder: Si a² + b² ≥ 1 ou |c| ≥ 1
    """
    _check_scale(delta, f_delta)
    if not (a * a + b * b < 1.0 and abs(c) < 1.0):
        raise OutOfCylinder(f"(a, b, c) = ({a}, {b}, {c}) is outside the unit cylinder")
    return _psi(ctx, p0, delta, f_delta, a, b, c)


def cylinder_jacobian(ctx: MetricContext, p0: BoundaryPoint, delta: float, f_delta: float,
                      h: float = JACOBIAN_STEP) -> float:
    """|det JΨ| à l'origine par différences centrées de pas h."""
    _check_scale(delta, f_delta)
    if not 0 < h < 0.5:
        raise InvalidArgument(f"step must lie in (0, 0.5), got {h}")
    columns = []
    for e in np.eye(3):
        plus = _psi(ctx, p0, delta, f_delta, *(h * e))
        minus = _psi(ctx, p0, delta, f_delta, *(-h * e))
        columns.append([(plus.x - minus.x) / (2 * h), (plus.y - minus.y) / (2 * h), (plus.t - minus.t) / (2 * h)])
    return float(abs(np.linalg.det(np.array(columns).T)))


def sample_cylinder(ctx: MetricContext, p0: BoundaryPoint, delta: float, n: int, seed: int = 0,
                    f_delta: Optional[float] = None) -> List[Tuple[float, float, float, BoundaryPoint]]:
    """
    n points de Cyl(p0, δ) tirés uniformément en (a, b) sur le disque unité et
    en c sur ]−1, 1[ ; f_δ vaut par défaut la borne inférieure de Λ(p0, δ).
    """
    if n < 0:
        raise InvalidArgument(f"sample count must be nonnegative, got {n}")
    if f_delta is None:
        f_delta = ctx.lambda_lower(p0.z, delta)
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n):
        r = math.sqrt(rng.uniform()) * (1.0 - 1e-9)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        c = rng.uniform(-1.0, 1.0) * (1.0 - 1e-9)
        a, b = r * math.cos(phi), r * math.sin(phi)
        samples.append((a, b, c, cylinder_point(ctx, p0, delta, f_delta, a, b, c)))
    return samples


def _loop(z: complex, theta: float, rho: float, orientation: str) -> np.ndarray:
    """LOOP_SIDES-gone régulier inscrit dans le cercle de rayon rho passant par z, centre dans la direction theta."""
    center = z + rho * complex(math.cos(theta), math.sin(theta))
    sign = -1.0 if orientation == "cw" else 1.0
    angles = theta + math.pi + sign * 2.0 * math.pi * np.arange(LOOP_SIDES) / LOOP_SIDES
    return center + rho * np.exp(1j * angles)


def _loop_perimeter(rho: float) -> float:
    return 2.0 * LOOP_SIDES * rho * math.sin(math.pi / LOOP_SIDES)


def reach_check(ctx: MetricContext, p0: BoundaryPoint, target: BoundaryPoint, budget: float) -> bool:
    """
    Tente d'atteindre target depuis p0 par un chemin de longueur ≤ budget :
    segment jusqu'à la base de target, puis 1 à 4 boucles identiques en
    target.z dont le rayon est ajusté par bissection sur le résidu en t.

    Un échec ne prouve pas d(p0, target) > budget.
    """
    if not (budget > 0 and math.isfinite(budget)):
        raise InvalidArgument(f"budget must be positive and finite, got {budget}")
    field = ctx.field
    tol = REACH_TOL * (1.0 + abs(target.t))

    segment = abs(target.z - p0.z)
    if segment > budget:
        return False
    residual = target.t - (p0.t + field.segment_twist(p0.z, target.z))
    if abs(residual) < tol:
        return True

    remaining = budget - segment
    orientation = "cw" if residual > 0 else "ccw"
    sign = 1.0 if residual > 0 else -1.0
    goal = abs(residual)

    for loops in range(1, MAX_LOOPS + 1):
        rho_max = remaining / (loops * _loop_perimeter(1.0))
        for k in range(LOOP_DIRECTIONS):
            theta = 2.0 * math.pi * k / LOOP_DIRECTIONS

            def gained(rho: float) -> float:
                return sign * loops * field.path_twist(_loop(target.z, theta, rho, orientation), closed=True)

            if gained(rho_max) < goal - tol:
                continue
            lo, hi = 0.0, rho_max
            for _ in range(BISECTION_STEPS):
                mid = 0.5 * (lo + hi)
                value = gained(mid)
                if abs(value - goal) < tol:
                    logger.debug(f"reach_check: {loops} loop(s) of radius {mid:.6g} toward angle {theta:.3f}")
                    return True
                if value < goal:
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= 1e-15 * rho_max:
                    break
            if abs(gained(hi) - goal) < tol:
                return True
    return False
