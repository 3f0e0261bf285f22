"""
Réseau de disques : densité h_k = 2^k/π sur le disque D_k de centre c_k et
de rayon r_k = 2^-k, nulle ailleurs. Les sites du réseau {(s·m, s·n)} sont
énumérés en spirale depuis l'origine, k = 1 à l'origine.
"""

import math
from typing import Any, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from ...core.config import DEFAULT_NUMERICS, NumericSettings
from ...core.exceptions import InvalidPotentialSpec
from ...core.geometry import ensure_simple_polygon, lens_area, polygon_disc_area
from ..base import Hotspot, PotentialField, Window

DEFAULT_WINDOW = (-50.0, -50.0, 50.0, 50.0)
LATTICE_SPACING = 10.0
# 2^-k reste représentable en double jusqu'à k ≈ 1074
MAX_INDEX = 1000
# r_k² / |z − c_k|² sous lequel le disque est une masse ponctuelle
UNRESOLVED_RATIO = 1e-20


def spiral_ring(rho: int) -> Iterator[Tuple[int, int]]:
    """Sites entiers de l'anneau max(|m|, |n|) = rho, dans l'ordre de la spirale."""
    if rho == 0:
        yield (0, 0)
        return
    for n in range(-rho + 1, rho + 1):
        yield (rho, n)
    for m in range(rho - 1, -rho - 1, -1):
        yield (m, rho)
    for n in range(rho - 1, -rho - 1, -1):
        yield (-rho, n)
    for m in range(-rho + 1, rho + 1):
        yield (m, -rho)


def spiral_index(m: int, n: int) -> int:
    """Indice k ≥ 1 du site (m, n) dans l'énumération en spirale."""
    rho = max(abs(m), abs(n))
    if rho == 0:
        return 1
    first = (2 * rho - 1) ** 2 + 1
    for offset, site in enumerate(spiral_ring(rho)):
        if site == (m, n):
            return first + offset
    raise ValueError(f"site ({m}, {n}) not on ring {rho}")


def spiral_site(k: int) -> Tuple[int, int]:
    """Site (m, n) d'indice k."""
    if k < 1:
        raise ValueError(f"spiral index starts at 1, got {k}")
    if k == 1:
        return (0, 0)
    rho = 1
    while (2 * rho + 1) ** 2 < k:
        rho += 1
    offset = k - (2 * rho - 1) ** 2 - 1
    for i, site in enumerate(spiral_ring(rho)):
        if i == offset:
            return site
    raise ValueError(f"index {k} not found on ring {rho}")


class DiscArrayField(PotentialField):
    """Champ à masse totale 1 dont la densité n'est pas bornée."""

    kind = "disc_array"

    def __init__(self, window: Window = DEFAULT_WINDOW, spacing: float = LATTICE_SPACING,
                 max_index: int = MAX_INDEX, numerics: NumericSettings = DEFAULT_NUMERICS):
        super().__init__(numerics)
        window = tuple(float(v) for v in window)
        if len(window) != 4 or not (window[0] < window[2] and window[1] < window[3]):
            raise InvalidPotentialSpec(f"window must be [x0, y0, x1, y1] with x0 < x1 and y0 < y1, got {window}")
        if not spacing > 2.0:
            raise InvalidPotentialSpec(f"lattice spacing must exceed 2 so discs stay disjoint, got {spacing}")
        if not 1 <= max_index <= MAX_INDEX:
            raise InvalidPotentialSpec(f"max_index must be in [1, {MAX_INDEX}], got {max_index}")

        self._window = window
        self.spacing = float(spacing)
        self.max_index = int(max_index)

        indices, centers = self._enumerate_sites()
        if not indices:
            raise InvalidPotentialSpec(f"window {window} contains no lattice site")
        order = np.argsort(indices)
        self.indices = np.asarray(indices, dtype=int)[order]
        self.centers = np.asarray(centers, dtype=complex)[order]
        self.radii = np.ldexp(1.0, -self.indices)
        self.masses = np.ldexp(1.0, -self.indices)
        self.heights = np.ldexp(1.0, self.indices) / math.pi
        self.logger.debug(f"disc array with {len(self.indices)} discs, max index {self.indices.max()}")

    def _enumerate_sites(self) -> Tuple[List[int], List[complex]]:
        x0, y0, x1, y1 = self._window
        pad = self.spacing
        reach = max(abs(x0), abs(x1), abs(y0), abs(y1)) + pad
        max_rho = int(math.ceil(reach / self.spacing))

        indices: List[int] = []
        centers: List[complex] = []
        k = 0
        for rho in range(max_rho + 1):
            for m, n in spiral_ring(rho):
                k += 1
                if k > self.max_index:
                    return indices, centers
                cx, cy = m * self.spacing, n * self.spacing
                if x0 - pad <= cx <= x1 + pad and y0 - pad <= cy <= y1 + pad:
                    indices.append(k)
                    centers.append(complex(cx, cy))
        return indices, centers

    @classmethod
    def from_config(cls, params: Dict[str, Any], numerics: NumericSettings) -> "DiscArrayField":
        return cls(window=params["window"], spacing=params["spacing"],
                   max_index=params["max_index"], numerics=numerics)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "window": list(self._window), "spacing": self.spacing,
                "max_index": self.max_index}

    @property
    def window(self) -> Window:
        return self._window

    def center(self, k: int) -> complex:
        """Centre c_k du disque d'indice k."""
        m, n = spiral_site(k)
        return complex(m * self.spacing, n * self.spacing)

    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def density_sup(self, window: Window, samples: int = 65) -> float:
        # La famille h_k = 2^k/π n'est pas bornée
        return math.inf

    def hotspots(self, center: complex, radius: float) -> List[Hotspot]:
        d = np.abs(self.centers - center)
        near = d <= radius + self.radii
        return [(complex(c), float(r)) for c, r in zip(self.centers[near], self.radii[near])]

    def laplacian(self, z: complex) -> float:
        inside = np.abs(self.centers - z) < self.radii
        return float(np.sum(self.heights[inside]))

    def laplacian_array(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        d = np.abs(zs[..., None] - self.centers)
        return np.sum(np.where(d < self.radii, self.heights, 0.0), axis=-1)

    def _field(self, w: np.ndarray) -> np.ndarray:
        dist = np.abs(w)
        inside = dist < self.radii
        with np.errstate(divide='ignore', invalid='ignore'):
            outer = self.masses / (2.0 * math.pi * dist ** 2)
        coef = np.where(inside, self.heights / 2.0, outer)
        return coef * w

    def gradient(self, z: complex) -> Tuple[float, float]:
        g = np.sum(self._field(z - self.centers))
        return float(g.real), float(g.imag)

    def gradient_array(self, zs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        zs = np.asarray(zs, dtype=complex)
        g = np.sum(self._field(zs[..., None] - self.centers), axis=-1)
        return g.real, g.imag

    def ball_mass(self, z: complex, r: float) -> float:
        self._check_radius(r)
        d = np.abs(self.centers - z)
        near = d < r + self.radii
        if not np.any(near):
            return 0.0
        rk = self.radii[near]
        fraction = lens_area(d[near], r, rk) / (math.pi * rk ** 2)
        return float(np.sum(np.clip(fraction, 0.0, 1.0) * self.masses[near]))

    def region_mass(self, polygon: Sequence[complex]) -> float:
        ensure_simple_polygon(polygon)
        z = np.asarray(polygon, dtype=complex)
        xmin, xmax = z.real.min(), z.real.max()
        ymin, ymax = z.imag.min(), z.imag.max()
        near = (
            (self.centers.real + self.radii > xmin) & (self.centers.real - self.radii < xmax)
            & (self.centers.imag + self.radii > ymin) & (self.centers.imag - self.radii < ymax)
        )
        total = 0.0
        for c, rk, mk in zip(self.centers[near], self.radii[near], self.masses[near]):
            area = polygon_disc_area(polygon, complex(c), float(rk))
            total += min(area / (math.pi * rk * rk), 1.0) * mk
        return total

    def segment_twists(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        Intégrales de segment exactes par superposition radiale.

        Hors d'un disque, la contribution vaut −(m_k/2π)·Δθ (angle balayé autour
        de c_k) ; à l'intérieur, −(h_k/2)·(u × v) pour le morceau u → v.
        Les disques plus petits que la résolution flottante de |a − c_k| sont
        traités comme des masses ponctuelles.
        """
        a = np.ravel(np.asarray(a, dtype=complex))[:, None]
        b = np.ravel(np.asarray(b, dtype=complex))[:, None]
        p = a - self.centers
        d = b - a
        dd = np.abs(d) ** 2
        pd = (np.conj(p) * d).real
        # p × d directement : pd² − dd·|p|² perd tous ses chiffres près du centre
        pxd = (np.conj(p) * d).imag
        r2 = self.radii ** 2
        disc = dd * r2 - pxd ** 2

        with np.errstate(divide='ignore', invalid='ignore'):
            root = np.sqrt(np.maximum(disc, 0.0))
            t1 = np.where(disc > 0, (-pd - root) / dd, 1.0)
            t2 = np.where(disc > 0, (-pd + root) / dd, 1.0)
        t1 = np.clip(np.nan_to_num(t1, nan=1.0), 0.0, 1.0)
        t2 = np.clip(np.nan_to_num(t2, nan=1.0), 0.0, 1.0)

        u0, u1, u2, u3 = p, p + t1 * d, p + t2 * d, p + d

        def sweep(u, v):
            cross = (np.conj(u) * v).imag
            dot = (np.conj(u) * v).real
            return np.arctan2(cross, dot)

        outside = sweep(u0, u1) + sweep(u2, u3)
        # u1 × u2 = (t2 − t1)·(p × d), borné par 2·r_k² sur la corde
        inside = np.clip((t2 - t1) * pxd, -2.0 * r2, 2.0 * r2)
        regular = -(self.masses / (2.0 * math.pi)) * outside - (self.heights / 2.0) * inside

        unresolved = r2 < UNRESOLVED_RATIO * np.maximum(np.abs(p) ** 2, np.abs(u3) ** 2)
        point = -(self.masses / (2.0 * math.pi)) * sweep(u0, u3)
        return np.sum(np.where(unresolved, point, regular), axis=1)

    def segment_twist(self, a: complex, b: complex) -> float:
        if a == b:
            return 0.0
        return float(self.segment_twists(np.array([a]), np.array([b]))[0])
