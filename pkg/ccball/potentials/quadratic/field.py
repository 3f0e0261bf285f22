import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ...core.config import DEFAULT_NUMERICS, NumericSettings
from ...core.exceptions import InvalidPotentialSpec
from ...core.geometry import ensure_simple_polygon, shoelace_area
from ..base import PotentialField


class QuadraticField(PotentialField):
    """P(z) = c|z|², densité constante ΔP = 4c. Tout est analytique."""

    kind = "quadratic"

    def __init__(self, c: float = 1.0, numerics: NumericSettings = DEFAULT_NUMERICS):
        super().__init__(numerics)
        if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0):
            raise InvalidPotentialSpec(f"quadratic scale c must be a positive finite number, got {c!r}")
        self.c = float(c)

    @classmethod
    def from_config(cls, params: Dict[str, Any], numerics: NumericSettings) -> "QuadraticField":
        return cls(c=params["c"], numerics=numerics)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "c": self.c}

    @property
    def has_bounded_hessian(self) -> bool:
        return True

    def value(self, z: complex) -> float:
        return self.c * abs(z) ** 2

    def laplacian(self, z: complex) -> float:
        return 4.0 * self.c

    def laplacian_array(self, zs: np.ndarray) -> np.ndarray:
        return np.full(np.shape(zs), 4.0 * self.c)

    def density_sup(self, window, samples: int = 65) -> float:
        return 4.0 * self.c

    def gradient(self, z: complex) -> Tuple[float, float]:
        return 2.0 * self.c * z.real, 2.0 * self.c * z.imag

    def gradient_array(self, zs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        zs = np.asarray(zs, dtype=complex)
        return 2.0 * self.c * zs.real, 2.0 * self.c * zs.imag

    def ball_mass(self, z: complex, r: float) -> float:
        self._check_radius(r)
        return 4.0 * self.c * math.pi * r * r

    def region_mass(self, polygon: Sequence[complex]) -> float:
        ensure_simple_polygon(polygon)
        return 4.0 * self.c * abs(shoelace_area(polygon))

    def dz_derivatives(self, z: complex, m: int) -> List[complex]:
        self._check_order(m)
        return [self.c * complex(z).conjugate()] + [0j] * (m - 1)

    def segment_twist(self, a: complex, b: complex) -> float:
        return 2.0 * self.c * (complex(a) * complex(b).conjugate()).imag

    def segment_twists(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.ravel(np.asarray(a, dtype=complex))
        b = np.ravel(np.asarray(b, dtype=complex))
        return 2.0 * self.c * (a * np.conj(b)).imag
