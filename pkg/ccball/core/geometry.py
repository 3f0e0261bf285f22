"""
Primitives géométriques planes partagées (aires exactes, moments, distances).

Les points du plan sont des nombres complexes ; les polygones sont des
séquences de sommets sans répétition du premier sommet.
"""

import math
from typing import Sequence, Tuple

import numpy as np
from shapely.geometry import LinearRing, Point, Polygon

from .exceptions import DegeneratePolygon

DEGENERATE_AREA_FACTOR = 1e-12


def as_xy(vertices: Sequence[complex]) -> np.ndarray:
    """Convertit une liste de complexes en tableau (n, 2)."""
    z = np.asarray(vertices, dtype=complex)
    return np.column_stack([z.real, z.imag])


def shoelace_area(vertices: Sequence[complex]) -> float:
    """Aire signée (positive pour le sens trigonométrique)."""
    z = np.asarray(vertices, dtype=complex)
    if z.size < 3:
        return 0.0
    zn = np.roll(z, -1)
    return 0.5 * float(np.sum(z.real * zn.imag - zn.real * z.imag))


def polygon_perimeter(vertices: Sequence[complex], closed: bool = True) -> float:
    z = np.asarray(vertices, dtype=complex)
    if closed:
        return float(np.sum(np.abs(np.roll(z, -1) - z)))
    return float(np.sum(np.abs(np.diff(z))))


def bbox_diameter(vertices: Sequence[complex]) -> float:
    z = np.asarray(vertices, dtype=complex)
    return float(math.hypot(np.ptp(z.real), np.ptp(z.imag)))


def is_simple_polygon(vertices: Sequence[complex]) -> bool:
    """Test indépendant de simplicité (aucune paire d'arêtes non adjacentes ne se touche)."""
    if len(vertices) < 3:
        return False
    ring = LinearRing(as_xy(vertices))
    return bool(ring.is_simple)


def ensure_simple_polygon(vertices: Sequence[complex]) -> None:
    """
    Vérifie qu'un polygone est simple et d'aire non négligeable.

    Raises:
        DegeneratePolygon: Si le polygone s'auto-intersecte ou si son aire est
            inférieure à 1e-12 × diamètre² de sa boîte englobante
    """
    if len(vertices) < 3:
        raise DegeneratePolygon(f"polygon needs at least 3 vertices, got {len(vertices)}")
    diameter = bbox_diameter(vertices)
    area = abs(shoelace_area(vertices))
    if diameter == 0.0 or area < DEGENERATE_AREA_FACTOR * diameter ** 2:
        raise DegeneratePolygon(f"polygon area {area:.3e} is degenerate (bbox diameter {diameter:.3e})")
    if not is_simple_polygon(vertices):
        raise DegeneratePolygon("polygon is self-intersecting")


def lens_area(d, r1, r2):
    """Aire de l'intersection de deux disques (vectorisée sur d et r2)."""
    d = np.asarray(d, dtype=float)
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    d, r1, r2 = np.broadcast_arrays(d, r1, r2)

    area = np.zeros(d.shape)
    rmin = np.minimum(r1, r2)
    contained = d <= np.abs(r1 - r2)
    area[contained] = np.pi * rmin[contained] ** 2

    partial = (~contained) & (d < r1 + r2)
    if np.any(partial):
        dp, a, b = d[partial], r1[partial], r2[partial]
        cos1 = np.clip((dp ** 2 + a ** 2 - b ** 2) / (2.0 * dp * a), -1.0, 1.0)
        cos2 = np.clip((dp ** 2 + b ** 2 - a ** 2) / (2.0 * dp * b), -1.0, 1.0)
        kite = (-dp + a + b) * (dp + a - b) * (dp - a + b) * (dp + a + b)
        area[partial] = (
            a ** 2 * np.arccos(cos1)
            + b ** 2 * np.arccos(cos2)
            - 0.5 * np.sqrt(np.maximum(kite, 0.0))
        )
    return area


def _edge_disc_area(p: complex, q: complex, r: float) -> float:
    """Aire signée de triangle(0, p, q) ∩ disque(0, r)."""
    d = q - p
    dd = (d * d.conjugate()).real
    if dd == 0.0:
        return 0.0
    pd = (p.conjugate() * d).real
    pp = (p * p.conjugate()).real
    disc = pd * pd - dd * (pp - r * r)

    cuts = [0.0, 1.0]
    if disc > 0.0:
        root = math.sqrt(disc)
        for t in ((-pd - root) / dd, (-pd + root) / dd):
            if 0.0 < t < 1.0:
                cuts.append(t)
    cuts.sort()

    total = 0.0
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        u = p + t0 * d
        v = p + t1 * d
        mid = p + 0.5 * (t0 + t1) * d
        cross = u.real * v.imag - u.imag * v.real
        if abs(mid) <= r:
            total += 0.5 * cross
        else:
            dot = u.real * v.real + u.imag * v.imag
            total += 0.5 * r * r * math.atan2(cross, dot)
    return total


def polygon_disc_area(vertices: Sequence[complex], center: complex, r: float) -> float:
    """Aire exacte (non signée) de polygone ∩ disque(center, r)."""
    if r <= 0.0:
        return 0.0
    shifted = [complex(v) - center for v in vertices]
    total = 0.0
    for i, p in enumerate(shifted):
        q = shifted[(i + 1) % len(shifted)]
        total += _edge_disc_area(p, q, r)
    return abs(total)


def polygon_moments(coords: np.ndarray) -> Tuple[float, float, float, float]:
    """
    Intégrales de 1, x, y et xy sur un polygone (formules de Green).

    Args:
        coords: Tableau (n, 2) des sommets, orientation quelconque

    Returns:
        (∫1, ∫x, ∫y, ∫xy), signes corrigés pour une aire positive
    """
    x = coords[:, 0]
    y = coords[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * np.sum(cross)
    mx = np.sum((x + xn) * cross) / 6.0
    my = np.sum((y + yn) * cross) / 6.0
    mxy = np.sum((x * yn + 2.0 * x * y + 2.0 * xn * yn + xn * y) * cross) / 24.0
    sign = -1.0 if area < 0 else 1.0
    return sign * area, sign * mx, sign * my, sign * mxy


def point_ring_distance(z: complex, vertices: Sequence[complex]) -> float:
    """Distance d'un point au bord d'un polygone."""
    return float(Point(z.real, z.imag).distance(LinearRing(as_xy(vertices))))


def circle_ring_distance(center: complex, r: float, vertices: Sequence[complex]) -> float:
    """Distance entre un cercle et le bord d'un polygone."""
    nearest = point_ring_distance(center, vertices)
    farthest = float(np.max(np.abs(np.asarray(vertices, dtype=complex) - center)))
    if nearest <= r <= farthest:
        return 0.0
    if r < nearest:
        return nearest - r
    return r - farthest


def circle_circle_distance(c1: complex, r1: float, c2: complex, r2: float) -> float:
    """Distance entre deux cercles (0 s'ils se coupent)."""
    d = abs(c1 - c2)
    return max(0.0, d - r1 - r2, abs(r1 - r2) - d)


def ring_ring_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    return float(LinearRing(as_xy(a)).distance(LinearRing(as_xy(b))))


def polygon_from(vertices: Sequence[complex]) -> Polygon:
    return Polygon(as_xy(vertices))
