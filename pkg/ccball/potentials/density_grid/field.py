import math
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import shapely

from ...core.config import DEFAULT_NUMERICS, NumericSettings
from ...core.exceptions import InvalidPotentialSpec, QuadratureBudgetExceeded
from ...core.geometry import ensure_simple_polygon, polygon_disc_area, polygon_from, polygon_moments
from ..base import PotentialField, Window
from .grid_io import DensityGrid, load_grid

MAX_SUBDIVISION = 1024
# Quart de cercle du polygone inscrit utilisé par ball_mass
DISC_QUAD_SEGS = 1024


def _log_kernel(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """G(u, v) = u·atan(v/u) + (v/2)·ln(u² + v²), avec ∂u∂v G = u/(u² + v²)."""
    r2 = u * u + v * v
    with np.errstate(divide='ignore', invalid='ignore'):
        t1 = np.where(u != 0.0, u * np.arctan(v / u), 0.0)
        t2 = np.where(r2 > 0.0, 0.5 * v * np.log(r2), 0.0)
    return t1 + t2


class DensityGridField(PotentialField):
    """
    Densité échantillonnée sur une grille, interpolée bilinéairement entre
    les nœuds et prolongée par 0 hors du support.

    Le gradient est la convolution logarithmique (1/2π)∫ΔP(w)(z−w)/|z−w|² dm(w),
    évaluée sur des sous-cellules de densité constante avec le noyau exact
    du rectangle, subdivision doublée jusqu'à convergence (extrapolation de
    Richardson).
    """

    kind = "density_grid"

    def __init__(self, grid: DensityGrid, numerics: NumericSettings = DEFAULT_NUMERICS,
                 path: Optional[str] = None):
        super().__init__(numerics)
        values = np.asarray(grid.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 2 or values.shape[1] < 2:
            raise InvalidPotentialSpec(f"density grid needs at least 2 x 2 nodes, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidPotentialSpec("density grid contains non-finite samples")
        if np.any(values < 0):
            raise InvalidPotentialSpec("density grid contains negative samples (P must be subharmonic)")
        if not np.any(values > 0):
            raise InvalidPotentialSpec("density grid is identically zero (P must be non-harmonic)")

        self.grid = DensityGrid(values=values, h=float(grid.h), origin=complex(grid.origin))
        self.path = path
        self.h = self.grid.h
        self.x0, self.y0, self.x1, self.y1 = self.grid.extent

        f00 = values[:-1, :-1]
        f10 = values[:-1, 1:]
        f01 = values[1:, :-1]
        f11 = values[1:, 1:]
        ny, nx = f00.shape
        cx = self.x0 + self.h * np.arange(nx)
        cy = self.y0 + self.h * np.arange(ny)
        CX, CY = np.meshgrid(cx, cy)
        active = (f00 + f10 + f01 + f11) > 0

        self._cx = CX[active]
        self._cy = CY[active]
        self._f00 = f00[active]
        self._f10 = f10[active]
        self._f01 = f01[active]
        self._f11 = f11[active]
        self._cell_mass = self.h * self.h * (self._f00 + self._f10 + self._f01 + self._f11) / 4.0
        self.total_mass = float(np.sum(self._cell_mass))
        self.logger.debug(f"density grid {self.grid.nx}x{self.grid.ny}, {active.sum()} active cells, mass {self.total_mass:.6g}")

    @classmethod
    def from_config(cls, params: Dict[str, Any], numerics: NumericSettings) -> "DensityGridField":
        return cls(load_grid(params["path"]), numerics=numerics, path=str(params["path"]))

    @classmethod
    def from_function(cls, fn, window: Window, n: int,
                      numerics: NumericSettings = DEFAULT_NUMERICS) -> "DensityGridField":
        return cls(DensityGrid.from_function(fn, window, n), numerics=numerics)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "path": self.path}

    @property
    def window(self) -> Window:
        return (self.x0, self.y0, self.x1, self.y1)

    @property
    def has_bounded_hessian(self) -> bool:
        # Densité lipschitzienne sur ℂ seulement si elle s'annule sur le bord du support
        v = self.grid.values
        return bool(np.all(v[0, :] == 0) and np.all(v[-1, :] == 0)
                    and np.all(v[:, 0] == 0) and np.all(v[:, -1] == 0))

    def density_sup(self, window: Window, samples: int = 65) -> float:
        wx0, wy0, wx1, wy1 = window
        hit = (self._cx + self.h >= wx0) & (self._cx <= wx1) & (self._cy + self.h >= wy0) & (self._cy <= wy1)
        if not np.any(hit):
            return 0.0
        corners = np.concatenate([self._f00[hit], self._f10[hit], self._f01[hit], self._f11[hit]])
        return float(corners.max())

    def laplacian_array(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        x, y = zs.real, zs.imag
        inside = (x >= self.x0) & (x <= self.x1) & (y >= self.y0) & (y <= self.y1)
        u = np.clip((x - self.x0) / self.h, 0.0, self.grid.nx - 1)
        v = np.clip((y - self.y0) / self.h, 0.0, self.grid.ny - 1)
        i = np.minimum(np.floor(u).astype(int), self.grid.nx - 2)
        j = np.minimum(np.floor(v).astype(int), self.grid.ny - 2)
        fu, fv = u - i, v - j
        g = self.grid.values
        value = (g[j, i] * (1 - fu) * (1 - fv) + g[j, i + 1] * fu * (1 - fv)
                 + g[j + 1, i] * (1 - fu) * fv + g[j + 1, i + 1] * fu * fv)
        return np.where(inside, value, 0.0)

    def laplacian(self, z: complex) -> float:
        return float(self.laplacian_array(np.array([z]))[0])

    def _gradient_at(self, z: complex, s: int) -> np.ndarray:
        h = self.h
        t = (np.arange(s) + 0.5) / s
        U, V = np.meshgrid(t, t)
        dens = (self._f00[:, None, None] * (1 - U) * (1 - V) + self._f10[:, None, None] * U * (1 - V)
                + self._f01[:, None, None] * (1 - U) * V + self._f11[:, None, None] * U * V)

        edges = h * np.arange(s + 1) / s
        ue = z.real - (self._cx[:, None] + edges)
        ve = z.imag - (self._cy[:, None] + edges)
        kx = _log_kernel(ue[:, None, :], ve[:, :, None])
        ky = _log_kernel(ve[:, :, None], ue[:, None, :])
        ix = kx[:, :-1, :-1] - kx[:, :-1, 1:] - kx[:, 1:, :-1] + kx[:, 1:, 1:]
        iy = ky[:, :-1, :-1] - ky[:, :-1, 1:] - ky[:, 1:, :-1] + ky[:, 1:, 1:]
        return np.array([np.sum(dens * ix), np.sum(dens * iy)]) / (2.0 * math.pi)

    def gradient(self, z: complex) -> Tuple[float, float]:
        z = complex(z)
        n_cells = self._cx.size
        previous = None
        previous_estimate = None
        s = 1
        while s <= MAX_SUBDIVISION:
            if n_cells * (s + 1) ** 2 > self.numerics.max_evaluations:
                break
            current = self._gradient_at(z, s)
            if previous is not None:
                estimate = (4.0 * current - previous) / 3.0
                if previous_estimate is not None:
                    tol = max(1e-12 * self.total_mass, 10.0 * self.numerics.quad_rel_tol * np.linalg.norm(estimate))
                    if np.linalg.norm(estimate - previous_estimate) <= tol:
                        return float(estimate[0]), float(estimate[1])
                previous_estimate = estimate
            previous = current
            s *= 2
        raise QuadratureBudgetExceeded(
            f"grid convolution at {z} did not converge within {self.numerics.max_evaluations} evaluations"
        )

    def ball_mass(self, z: complex, r: float) -> float:
        """
        Masse exacte de l'interpolant sur B(z, r) à l'épaisseur de la lunule près.

        Les cellules de bord sont coupées par un polygone inscrit (shapely) et
        intégrées exactement ; la lunule entre le polygone et le cercle reçoit
        la densité moyenne de l'arc contenu dans la cellule.
        """
        self._check_radius(r)
        z = complex(z)
        x, y, h = z.real, z.imag, self.h
        dx = np.maximum(np.maximum(self._cx - x, x - (self._cx + h)), 0.0)
        dy = np.maximum(np.maximum(self._cy - y, y - (self._cy + h)), 0.0)
        near = dx * dx + dy * dy < r * r
        fx = np.maximum(np.abs(self._cx - x), np.abs(self._cx + h - x))
        fy = np.maximum(np.abs(self._cy - y), np.abs(self._cy + h - y))
        full = near & (fx * fx + fy * fy <= r * r)
        boundary = np.flatnonzero(near & ~full)

        total = float(np.sum(self._cell_mass[full]))
        if boundary.size == 0:
            return total

        disc = shapely.Point(x, y).buffer(r, quad_segs=DISC_QUAD_SEGS)
        arc = np.asarray(disc.exterior.coords)[:-1]
        arc_density = self.laplacian_array(arc[:, 0] + 1j * arc[:, 1])
        boxes = shapely.box(self._cx[boundary], self._cy[boundary],
                            self._cx[boundary] + h, self._cy[boundary] + h)
        pieces = shapely.intersection(boxes, disc)

        for idx, piece in zip(boundary, pieces):
            cx, cy = self._cx[idx], self._cy[idx]
            rect = [complex(cx, cy), complex(cx + h, cy), complex(cx + h, cy + h), complex(cx, cy + h)]
            exact_area = polygon_disc_area(rect, z, r)
            inner = 0.0 if piece.is_empty else self._bilinear_integral(piece, idx)
            sliver = exact_area - (0.0 if piece.is_empty else piece.area)
            if sliver > 0.0:
                on_arc = ((arc[:, 0] >= cx) & (arc[:, 0] <= cx + h) & (arc[:, 1] >= cy) & (arc[:, 1] <= cy + h))
                density = float(arc_density[on_arc].mean()) if np.any(on_arc) else self._cell_mass[idx] / (h * h)
                inner += sliver * density
            total += inner
        return total

    def region_mass(self, polygon: Sequence[complex]) -> float:
        ensure_simple_polygon(polygon)
        poly = polygon_from(polygon)
        minx, miny, maxx, maxy = poly.bounds
        h = self.h
        hit = np.flatnonzero(
            (self._cx + h > minx) & (self._cx < maxx) & (self._cy + h > miny) & (self._cy < maxy)
        )
        if hit.size == 0:
            return 0.0
        boxes = shapely.box(self._cx[hit], self._cy[hit], self._cx[hit] + h, self._cy[hit] + h)
        pieces = shapely.intersection(boxes, poly)

        total = 0.0
        for idx, piece in zip(hit, pieces):
            if piece.is_empty:
                continue
            total += self._bilinear_integral(piece, idx)
        return total

    def _bilinear_integral(self, geometry, idx: int) -> float:
        """Intégrale exacte de l'interpolant bilinéaire de la cellule idx sur une géométrie."""
        origin = np.array([self._cx[idx], self._cy[idx]])
        f00, f10, f01, f11 = self._f00[idx], self._f10[idx], self._f01[idx], self._f11[idx]
        h = self.h

        def ring_integral(coords: np.ndarray) -> float:
            area, mx, my, mxy = polygon_moments(coords[:-1] - origin)
            return (f00 * area + (f10 - f00) * mx / h + (f01 - f00) * my / h
                    + (f00 - f10 - f01 + f11) * mxy / (h * h))

        total = 0.0
        for part in shapely.get_parts(geometry):
            if part.geom_type != "Polygon":
                continue
            total += ring_integral(np.asarray(part.exterior.coords))
            for interior in part.interiors:
                total -= ring_integral(np.asarray(interior.coords))
        return total
