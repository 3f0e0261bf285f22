"""
Potentiels P et requêtes de densité.

Les fonctions de ce module sont des raccourcis vers les méthodes de
PotentialField, pour les appels de la forme op(field, ...).
"""

from typing import List, Sequence, Tuple

from .base import PotentialField, Window
from .density_grid import DensityGrid, DensityGridField, load_grid, write_grid
from .disc_array import DiscArrayField
from .quadratic import QuadraticField
from .registry import PotentialRegistry, build_field, get_registry


def laplacian(field: PotentialField, z: complex) -> float:
    return field.laplacian(z)


def gradient(field: PotentialField, z: complex) -> Tuple[float, float]:
    return field.gradient(z)


def ball_mass(field: PotentialField, z: complex, r: float) -> float:
    return field.ball_mass(z, r)


def region_mass(field: PotentialField, polygon: Sequence[complex]) -> float:
    return field.region_mass(polygon)


def dz_derivatives(field: PotentialField, z: complex, m: int) -> List[complex]:
    return field.dz_derivatives(z, m)


def t_offset(field: PotentialField, p0, p1, regime: str = "large", m: int = 2) -> float:
    """T(p0, p1) entre deux BoundaryPoint ; ne dépend que des points de base."""
    return field.t_offset(p0.z, p1.z, regime, m)


__all__ = [
    'PotentialField',
    'Window',
    'QuadraticField',
    'DiscArrayField',
    'DensityGridField',
    'DensityGrid',
    'load_grid',
    'write_grid',
    'PotentialRegistry',
    'build_field',
    'get_registry',
    'laplacian',
    'gradient',
    'ball_mass',
    'region_mass',
    'dz_derivatives',
    't_offset',
]
