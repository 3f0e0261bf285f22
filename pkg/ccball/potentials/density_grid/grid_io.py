"""
Lecture et écriture du format texte `ccgrid v1`.

En-tête : `ccgrid v1 <nx> <ny> <h_grid> <origin_x> <origin_y>`, puis nx·ny
réels positifs ou nuls, ligne par ligne (y externe, x interne).
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union

import numpy as np

from ...core.exceptions import GridFormatError

logger = logging.getLogger("ccball.potentials.density_grid")

MAGIC = ("ccgrid", "v1")


@dataclass(frozen=True)
class DensityGrid:
    """Échantillons de ΔP aux nœuds origin + (i·h, j·h), values[j, i]."""

    values: np.ndarray
    h: float
    origin: complex

    @property
    def nx(self) -> int:
        return int(self.values.shape[1])

    @property
    def ny(self) -> int:
        return int(self.values.shape[0])

    @property
    def extent(self):
        """(x0, y0, x1, y1) du support."""
        x0, y0 = self.origin.real, self.origin.imag
        return (x0, y0, x0 + (self.nx - 1) * self.h, y0 + (self.ny - 1) * self.h)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      window, n: int) -> "DensityGrid":
        """Échantillonne fn(x, y) sur n × n nœuds couvrant la fenêtre carrée."""
        x0, y0, x1, y1 = window
        h = max(x1 - x0, y1 - y0) / (n - 1)
        xs = x0 + h * np.arange(n)
        ys = y0 + h * np.arange(n)
        X, Y = np.meshgrid(xs, ys)
        values = np.maximum(np.asarray(fn(X, Y), dtype=float), 0.0)
        return cls(values=values, h=h, origin=complex(x0, y0))


def load_grid(path: Union[str, Path]) -> DensityGrid:
    """
    Charge une grille de densité.

    Raises:
        GridFormatError: En-tête invalide, nombre de valeurs incorrect,
            valeur non finie ou négative
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except FileNotFoundError:
        raise GridFormatError(f"grid file not found: {path}")

    tokens = text.split()
    if len(tokens) < 7 or tuple(tokens[:2]) != MAGIC:
        raise GridFormatError(f"{path}: missing 'ccgrid v1' header")
    try:
        nx, ny = int(tokens[2]), int(tokens[3])
        h, ox, oy = float(tokens[4]), float(tokens[5]), float(tokens[6])
        values = np.array([float(t) for t in tokens[7:]], dtype=float)
    except ValueError as e:
        raise GridFormatError(f"{path}: {e}")

    if nx < 2 or ny < 2:
        raise GridFormatError(f"{path}: grid needs at least 2 x 2 nodes, got {nx} x {ny}")
    if not (h > 0 and math.isfinite(h)):
        raise GridFormatError(f"{path}: h_grid must be positive, got {h}")
    if values.size != nx * ny:
        raise GridFormatError(f"{path}: expected {nx * ny} values, found {values.size}")

    logger.debug(f"Loaded grid {nx}x{ny} (h={h}) from {path}")
    return DensityGrid(values=values.reshape(ny, nx), h=h, origin=complex(ox, oy))


def write_grid(path: Union[str, Path], grid: DensityGrid) -> None:
    """Écrit une grille au format ccgrid v1 (une ligne par rangée y)."""
    path = Path(path)
    lines = [f"ccgrid v1 {grid.nx} {grid.ny} {grid.h!r} {grid.origin.real!r} {grid.origin.imag!r}"]
    for row in grid.values:
        lines.append(" ".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding='utf-8')
