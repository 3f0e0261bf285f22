"""
Boucles polygonales fermées et cycles simples orientés.
"""

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidArgument
from ..core.geometry import bbox_diameter, polygon_perimeter, shoelace_area

MIN_EDGE = 1e-12


@dataclass(frozen=True, eq=False)
class PolyLoop:
    """
    Boucle v0 … v_{M−1} fermée par l'arête implicite v_{M−1} → v0.

    params[i] est le paramètre de v_i dans la boucle d'origine (indice
    d'arête + fraction) ; base_index repère z0.
    """

    vertices: np.ndarray
    base_index: int = 0
    params: Optional[np.ndarray] = None
    refined: bool = False

    def __post_init__(self):
        z = np.array(self.vertices, dtype=complex).ravel()
        if z.size < 3:
            raise InvalidArgument(f"loop needs at least 3 vertices, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise InvalidArgument("loop vertices must be finite")
        gaps = np.abs(np.roll(z, -1) - z)
        if np.any(gaps < MIN_EDGE):
            i = int(np.argmin(gaps))
            raise InvalidArgument(f"consecutive loop vertices {i} and {(i + 1) % z.size} coincide")
        if not 0 <= self.base_index < z.size:
            raise InvalidArgument(f"base index {self.base_index} out of range for {z.size} vertices")
        params = np.arange(z.size, dtype=float) if self.params is None else np.array(self.params, dtype=float)
        if params.shape != z.shape:
            raise InvalidArgument("loop params must match vertices")
        z.setflags(write=False)
        params.setflags(write=False)
        object.__setattr__(self, "vertices", z)
        object.__setattr__(self, "params", params)

    @classmethod
    def from_points(cls, points: Sequence[complex], base_index: int = 0) -> "PolyLoop":
        """Construit une boucle en retirant les sommets répétés consécutifs et la fermeture explicite."""
        kept: List[complex] = []
        base = 0
        for i, p in enumerate(points):
            p = complex(p)
            if kept and abs(p - kept[-1]) < MIN_EDGE:
                continue
            if i == base_index:
                base = len(kept)
            kept.append(p)
        while len(kept) > 1 and abs(kept[-1] - kept[0]) < MIN_EDGE:
            kept.pop()
        return cls(np.array(kept), base_index=min(base, max(len(kept) - 1, 0)))

    @classmethod
    def from_control(cls, u, z0: complex, delta: float) -> "PolyLoop":
        """Projection plane fermée d'un contrôle de moyenne nulle, base en z0."""
        from ..controls.flow import planar_path

        return cls.from_points(planar_path(u, z0, delta), base_index=0)

    @classmethod
    def from_json(cls, data: Any) -> "PolyLoop":
        """Relit une liste [[x, y], ...]."""
        if not isinstance(data, list):
            raise InvalidArgument("loop must be a JSON list of [x, y] pairs")
        points = []
        for row in data:
            if not isinstance(row, (list, tuple)) or len(row) != 2:
                raise InvalidArgument(f"loop vertex must be [x, y], got {row!r}")
            try:
                points.append(complex(float(row[0]), float(row[1])))
            except (TypeError, ValueError):
                raise InvalidArgument(f"loop vertex must be numeric, got {row!r}")
        return cls.from_points(points)

    def to_json(self) -> List[List[float]]:
        return [[float(v.real), float(v.imag)] for v in self.vertices]

    @property
    def size(self) -> int:
        return int(self.vertices.size)

    @property
    def base_point(self) -> complex:
        return complex(self.vertices[self.base_index])

    def length(self) -> float:
        return polygon_perimeter(self.vertices)

    def diameter(self) -> float:
        return bbox_diameter(self.vertices)

    def reversed(self) -> "PolyLoop":
        """Même boucle parcourue en sens inverse depuis la même base."""
        z = np.roll(self.vertices, -self.base_index)
        z = np.concatenate([z[:1], z[1:][::-1]])
        return PolyLoop(z, base_index=0)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1)


@dataclass(frozen=True, eq=False)
class SimpleCycle:
    """Cycle simple orienté issu de la décomposition eulérienne."""

    vertices: np.ndarray
    orientation: str
    provenance: List[Tuple[float, float]] = field(default_factory=list)
    # aire sous la résolution de la boucle ; masse estimée au premier ordre
    degenerate: bool = False

    @property
    def area(self) -> float:
        """Aire signée (négative pour un cycle horaire)."""
        return shoelace_area(self.vertices)

    def length(self) -> float:
        return polygon_perimeter(self.vertices)

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation,
            "vertices": [[float(v.real), float(v.imag)] for v in self.vertices],
            "provenance": [[float(a), float(b)] for a, b in self.provenance],
            "degenerate": self.degenerate,
        }
