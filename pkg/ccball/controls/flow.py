"""
Intégration du flot CC d'un contrôle constant par morceaux.

Les champs utilisés sont X = ∂x + ∂yP ∂t et Y = −∂y + ∂xP ∂t : la projection
plane du chemin a pour longueur euclidienne L(πγ) = δ∫|(α, β)|, et
l'incrément vertical est l'intégrale ∫ ∂yP dx − ∂xP dy le long de cette
projection.
"""

import logging
import math

import numpy as np

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidArgument
from ..potentials.base import PotentialField
from .control_pair import BoundaryPoint, ControlPair

logger = logging.getLogger("ccball.controls")

ORIENTATIONS = ("cw", "ccw")


def _check_delta(delta: float):
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidArgument(f"delta must be positive and finite, got {delta}")


def planar_path(u: ControlPair, z0: complex, delta: float) -> np.ndarray:
    """Sommets de la projection plane : z0 + δ Σ w_j (α_j − iβ_j)."""
    steps = delta * u.widths * (u.alpha - 1j * u.beta)
    return complex(z0) + np.concatenate([[0j], np.cumsum(steps)])


def twist(field: PotentialField, z0: complex, delta: float, u: ControlPair) -> float:
    """
    Fonctionnelle de torsion Λ_{z0,δ}(α, β).

    Ne dépend pas de t0 : seule la base z0 entre dans le calcul.
    """
    _check_delta(delta)
    return field.path_twist(planar_path(u, z0, delta))


def integrate_flow(field: PotentialField, p0: BoundaryPoint, delta: float, u: ControlPair) -> BoundaryPoint:
    """Extrémité F_{(α,β),δ}(p0) du flot issu de p0."""
    _check_delta(delta)
    vertices = planar_path(u, p0.z, delta)
    t = p0.t + field.path_twist(vertices)
    return BoundaryPoint(complex(vertices[-1]), t)


def path_length(u: ControlPair, delta: float) -> float:
    """L(πγ) = δ Σ w_j √(α_j² + β_j²), forme close."""
    if delta < 0:
        raise InvalidArgument(f"delta must be nonnegative, got {delta}")
    return float(delta * np.dot(u.widths, u.speeds))


def circle_control(K: int, orientation: str = "cw",
                   numerics: NumericSettings = DEFAULT_NUMERICS) -> ControlPair:
    """
    Contrôle à K segments égaux dont la projection est un K-gone régulier
    fermé, parcouru une fois à vitesse 1 − marge.

    Raises:
        InvalidArgument: Si K < 3 ou si l'orientation est inconnue
    """
    if K < 3:
        raise InvalidArgument(f"circle control needs K >= 3 segments, got {K}")
    if orientation not in ORIENTATIONS:
        raise InvalidArgument(f"orientation must be 'cw' or 'ccw', got '{orientation}'")

    sign = -1.0 if orientation == "cw" else 1.0
    phi = sign * 2.0 * math.pi * np.arange(K) / K
    speed = 1.0 - numerics.speed_margin
    # vitesse plane δ(α, −β) dans la direction φ_j
    alpha = speed * np.cos(phi)
    beta = -speed * np.sin(phi)
    breakpoints = np.linspace(0.0, 1.0, K + 1)
    return ControlPair.mean_zero_from(breakpoints, alpha, beta, numerics)
