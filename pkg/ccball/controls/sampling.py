"""
Borne inférieure Monte Carlo de Λ(p0, δ) par contrôles aléatoires de 𝒳*.
"""

import logging

import numpy as np

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidArgument
from ..potentials.base import PotentialField
from .control_pair import ControlPair
from .flow import twist

logger = logging.getLogger("ccball.controls.sampling")

MIN_SEGMENTS = 4
MAX_SEGMENTS = 64


def random_control(rng: np.random.Generator, k_min: int = MIN_SEGMENTS, k_max: int = MAX_SEGMENTS,
                   numerics: NumericSettings = DEFAULT_NUMERICS) -> ControlPair:
    """
    Tire un contrôle de moyenne nulle : K uniforme dans [k_min, k_max],
    largeurs de Dirichlet, valeurs gaussiennes projetées puis mises à la
    vitesse maximale 1 − marge.
    """
    K = int(rng.integers(k_min, k_max + 1))
    widths = np.maximum(rng.dirichlet(np.ones(K)), 1e-9)
    widths /= widths.sum()
    breakpoints = np.concatenate([[0.0], np.cumsum(widths)])
    breakpoints[-1] = 1.0
    alpha = rng.standard_normal(K)
    beta = rng.standard_normal(K)

    alpha = alpha - np.dot(widths, alpha)
    beta = beta - np.dot(widths, beta)
    top = float(np.max(np.hypot(alpha, beta)))
    if top > 0.0:
        scale = (1.0 - numerics.speed_margin) / top
        alpha, beta = alpha * scale, beta * scale
    return ControlPair.mean_zero_from(breakpoints, alpha, beta, numerics)


def mc_lower_bound(field: PotentialField, z0: complex, delta: float, samples: int, seed: int,
                   k_min: int = MIN_SEGMENTS, k_max: int = MAX_SEGMENTS) -> float:
    """
    max |Λ_{z0,δ}(α, β)| sur `samples` contrôles aléatoires de 𝒳*.

    Déterministe pour une graine donnée. k_min et k_max fixent la finesse
    des contrôles tirés.

    Raises:
        InvalidArgument: Si samples < 1 ou si [k_min, k_max] est invalide
    """
    if samples < 1:
        raise InvalidArgument(f"samples must be >= 1, got {samples}")
    if not 1 <= k_min <= k_max:
        raise InvalidArgument(f"invalid segment range [{k_min}, {k_max}]")

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        u = random_control(rng, k_min, k_max, field.numerics)
        best = max(best, abs(twist(field, z0, delta, u)))
    logger.debug(f"mc_lower_bound z0={z0} delta={delta} samples={samples} seed={seed}: {best:.6g}")
    return best
