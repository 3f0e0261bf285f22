"""
Conditions de densité gouvernant les structures globales uniformes.

Les inf et sup sur des continus sont échantillonnés sur des grilles
régulières ; les constantes rendues sont des estimations empiriques.
"""

import logging
import math
from typing import Iterable, List, Tuple

import numpy as np

from ..core.exceptions import InvalidArgument, UnsupportedOrder
from ..potentials.base import MACHINE_EPS, PotentialField, Window

logger = logging.getLogger("ccball.ugs")

LOWER_LADDER = 11
UPPER_LADDER = 21
AVERAGE_FACTORS = (1.0, 2.0, 4.0)
MAX_TYPE_ORDER = 4
TYPE_BOUNDS = (1e-3, 1e3)


def check_window(window: Window) -> Window:
    if len(window) != 4:
        raise InvalidArgument(f"window must be x0,y0,x1,y1, got {window}")
    x0, y0, x1, y1 = (float(v) for v in window)
    if not (x0 <= x1 and y0 <= y1):
        raise InvalidArgument(f"window corners must satisfy x0 <= x1 and y0 <= y1, got {window}")
    return x0, y0, x1, y1


def window_sites(window: Window, grid_n: int) -> np.ndarray:
    """grid_n × grid_n points réguliers de la fenêtre (le centre si grid_n = 1)."""
    if grid_n < 1:
        raise InvalidArgument(f"grid_n must be >= 1, got {grid_n}")
    x0, y0, x1, y1 = check_window(window)
    if grid_n == 1:
        return np.array([complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)])
    X, Y = np.meshgrid(np.linspace(x0, x1, grid_n), np.linspace(y0, y1, grid_n))
    return (X + 1j * Y).ravel()


def disc_sites(center: complex, radius: float, grid_n: int) -> np.ndarray:
    """Le centre, puis les points d'une grille grid_n × grid_n du carré circonscrit tombant dans B(center, radius)."""
    center = complex(center)
    square = window_sites((center.real - radius, center.imag - radius,
                           center.real + radius, center.imag + radius), grid_n)
    inside = square[(np.abs(square - center) <= radius * (1.0 + 1e-12)) & (square != center)]
    return np.concatenate(([center], inside))


def _ratio(field: PotentialField, z: complex, d: float) -> float:
    return field.ball_mass(complex(z), d) / (d + d * d)


def _best_ratio(field: PotentialField, sites: Iterable[complex], radii: Iterable[float]) -> float:
    sites, radii = list(sites), list(radii)
    if not sites or not radii:
        raise InvalidArgument("density ratios need at least one sample point and one radius")
    return max(_ratio(field, z, d) for z in sites for d in radii)


def check_lower_density(field: PotentialField, window: Window, delta0: float, grid_n: int = 5) -> float:
    """
    C₁ empirique : inf sur z0 de sup sur z ∈ B(z0, δ0) et 0 < δ̂ ≤ δ0 de
    (δ̂ + δ̂²)⁻¹ ∫_{B(z, δ̂)} ΔP.

    δ̂ parcourt δ0·2^−j (j = 0..10) ; les concentrations connues du champ
    sont ajoutées avec leur propre rayon.
    """
    if not delta0 > 0:
        raise InvalidArgument(f"delta0 must be positive, got {delta0}")
    ladder = [delta0 * 2.0 ** (-j) for j in range(LOWER_LADDER)]

    worst = math.inf
    for z0 in window_sites(window, grid_n):
        z0 = complex(z0)
        best = _best_ratio(field, disc_sites(z0, delta0, grid_n), ladder)
        for center, radius in field.hotspots(z0, delta0):
            if abs(center - z0) <= delta0 and radius <= delta0:
                best = max(best, _ratio(field, center, radius))
        worst = min(worst, best)
        if worst == 0.0:
            break
    logger.debug(f"check_lower_density delta0={delta0} grid_n={grid_n}: {worst:.6g}")
    return float(worst)


def check_upper_density(field: PotentialField, window: Window, delta_max: float, grid_n: int = 5) -> float:
    """
    C₂ empirique : sup sur z0 et δ ≤ delta_max de (δ + δ²)⁻¹ ∫_{B(z0, δ)} ΔP.

    δ parcourt delta_max·2^−j (j = 0..20) ; les concentrations connues à
    moins de delta_max de la fenêtre sont échantillonnées à leur rayon.
    """
    if not delta_max > 0:
        raise InvalidArgument(f"delta_max must be positive, got {delta_max}")
    ladder = [delta_max * 2.0 ** (-j) for j in range(UPPER_LADDER)]

    x0, y0, x1, y1 = check_window(window)
    best = _best_ratio(field, window_sites(window, grid_n), ladder)
    middle = complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)
    reach = 0.5 * math.hypot(x1 - x0, y1 - y0) + delta_max
    for center, radius in field.hotspots(middle, reach):
        if radius <= delta_max:
            best = max(best, _ratio(field, center, radius), _best_ratio(field, [center], ladder))
    logger.debug(f"check_upper_density delta_max={delta_max} grid_n={grid_n}: {best:.6g}")
    return float(best)


def check_averages(field: PotentialField, window: Window, delta0: float, grid_n: int = 5) -> Tuple[float, float]:
    """(min, max) de |B(z, δ)|⁻¹ ∫_{B(z, δ)} ΔP pour δ ∈ {δ0, 2δ0, 4δ0}."""
    if not delta0 > 0:
        raise InvalidArgument(f"delta0 must be positive, got {delta0}")
    averages: List[float] = []
    for z in window_sites(window, grid_n):
        for factor in AVERAGE_FACTORS:
            d = factor * delta0
            averages.append(field.ball_mass(complex(z), d) / (math.pi * d * d))
    return float(min(averages)), float(max(averages))


def _partial(field: PotentialField, z: complex, ax: int, ay: int, h: float) -> float:
    """∂x^ax ∂y^ay ΔP(z) par différences centrées imbriquées."""
    if ax > 0:
        return (_partial(field, z + h, ax - 1, ay, h) - _partial(field, z - h, ax - 1, ay, h)) / (2.0 * h)
    if ay > 0:
        return (_partial(field, z + 1j * h, ax, ay - 1, h) - _partial(field, z - 1j * h, ax, ay - 1, h)) / (2.0 * h)
    return field.laplacian(z)


def type_m(field: PotentialField, window: Window, m: int, grid_n: int = 5,
           bounds: Tuple[float, float] = TYPE_BOUNDS) -> bool:
    """
    Vrai si sup_{0 ≤ j ≤ m−2} |∇^j ΔP(z0)| reste dans [bounds] pour tous les z0 échantillonnés.

    Raises:
        InvalidArgument: Si m < 2
        UnsupportedOrder: Si m − 2 dépasse 4
    """
    if m < 2:
        raise InvalidArgument(f"type order m must be >= 2, got {m}")
    if m - 2 > MAX_TYPE_ORDER:
        raise UnsupportedOrder(f"type order m={m} needs derivatives of order {m - 2} > {MAX_TYPE_ORDER}")
    lo, hi = bounds

    for z0 in window_sites(window, grid_n):
        z0 = complex(z0)
        size = abs(field.laplacian(z0))
        for j in range(1, m - 1):
            h = (1.0 + abs(z0)) * max(field.numerics.fd_step_factor, MACHINE_EPS ** (1.0 / (j + 2)))
            size = max(size, max(abs(_partial(field, z0, a, j - a, h)) for a in range(j + 1)))
        if not lo <= size <= hi:
            logger.debug(f"type_m: sup at {z0} is {size:.3e}, outside [{lo}, {hi}]")
            return False
    return True
