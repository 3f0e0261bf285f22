from abc import ABC, abstractmethod
import functools
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidArgument, QuadratureBudgetExceeded, UnsupportedOrder

Window = Tuple[float, float, float, float]
Hotspot = Tuple[complex, float]

MACHINE_EPS = 2.220446049250313e-16


class PotentialField(ABC):
    """
    Classe abstraite de base pour tous les potentiels P : ℂ → ℝ.

    Un champ est immuable après construction. Les sous-classes fournissent la
    densité ΔP (laplacien standard ∂xx + ∂yy), le gradient et les masses ;
    la classe de base dérive le reste (dérivées ∂_z, intégrales de segment,
    décalage T).
    """

    kind: str = ""

    def __init__(self, numerics: NumericSettings = DEFAULT_NUMERICS):
        """
        Args:
            numerics: Tolérances numériques partagées
        """
        self.numerics = numerics
        self.logger = logging.getLogger(f"ccball.potentials.{self.kind}")

    # Requêtes fondamentales

    @abstractmethod
    def laplacian(self, z: complex) -> float:
        """Densité ΔP(z) ≥ 0."""

    @abstractmethod
    def gradient(self, z: complex) -> Tuple[float, float]:
        """(∂xP, ∂yP) au point z."""

    @abstractmethod
    def ball_mass(self, z: complex, r: float) -> float:
        """∫_{B(z,r)} ΔP dm."""

    @abstractmethod
    def region_mass(self, polygon: Sequence[complex]) -> float:
        """∫_polygon ΔP dm pour un polygone simple."""

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Spécification JSON du champ (relisible par le registre)."""

    # Requêtes dérivées

    @property
    def window(self) -> Optional[Window]:
        """Fenêtre de travail du champ, si elle existe."""
        return None

    @property
    def has_bounded_hessian(self) -> bool:
        return False

    def hotspots(self, center: complex, radius: float) -> List[Hotspot]:
        """Concentrations de densité connues (centre, rayon) rencontrant B(center, radius)."""
        return []

    def density_sup(self, window: Window, samples: int = 65) -> float:
        """Estimation de ‖ΔP‖∞ sur une fenêtre par échantillonnage."""
        x0, y0, x1, y1 = window
        xs = np.linspace(x0, x1, samples)
        ys = np.linspace(y0, y1, samples)
        best = 0.0
        for y in ys:
            for x in xs:
                best = max(best, self.laplacian(complex(x, y)))
        return best

    def laplacian_array(self, zs: np.ndarray) -> np.ndarray:
        return np.array([self.laplacian(complex(z)) for z in np.ravel(zs)]).reshape(np.shape(zs))

    def gradient_array(self, zs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        flat = np.ravel(zs)
        gx = np.empty(flat.shape)
        gy = np.empty(flat.shape)
        for i, z in enumerate(flat):
            gx[i], gy[i] = self.gradient(complex(z))
        return gx.reshape(np.shape(zs)), gy.reshape(np.shape(zs))

    def _check_radius(self, r: float):
        if not r > 0:
            raise InvalidArgument(f"radius must be positive, got {r}")

    def dz_derivatives(self, z: complex, m: int) -> List[complex]:
        """
        Dérivées (∂_z^k P(z))_{k=1..m} avec ∂_z = (∂x − i∂y)/2.

        L'ordre 1 vient directement du gradient ; les ordres supérieurs sont
        obtenus par différences centrées imbriquées.

        Raises:
            UnsupportedOrder: Si m dépasse la limite configurée
        """
        self._check_order(m)
        results = []
        for k in range(1, m + 1):
            if k == 1:
                gx, gy = self.gradient(z)
                results.append(complex(gx, -gy) / 2.0)
            else:
                results.append(self._dz_finite_difference(z, k))
        return results

    def _check_order(self, m: int):
        if m < 1:
            raise InvalidArgument(f"derivative order must be >= 1, got {m}")
        if m > self.numerics.max_derivative_order:
            raise UnsupportedOrder(
                f"derivative order {m} exceeds cap {self.numerics.max_derivative_order}"
            )

    def _dz_finite_difference(self, z: complex, k: int) -> complex:
        # Le pas grandit avec l'ordre pour contenir l'amplification des arrondis
        h = max(self.numerics.fd_step(z), (1.0 + abs(z)) * MACHINE_EPS ** (1.0 / (k + 1)))

        def first(w: complex) -> complex:
            gx, gy = self.gradient(w)
            return complex(gx, -gy) / 2.0

        def apply(f, w: complex) -> complex:
            fx = (f(w + h) - f(w - h)) / (2.0 * h)
            fy = (f(w + 1j * h) - f(w - 1j * h)) / (2.0 * h)
            return (fx - 1j * fy) / 2.0

        f = first
        for _ in range(k - 1):
            f = functools.partial(apply, f)
        return f(z)

    def segment_twist(self, a: complex, b: complex) -> float:
        """
        Intégrale ∫ ∂yP dx − ∂xP dy le long du segment a → b.

        Quadrature adaptative (scipy.integrate.quad) à tolérance relative
        configurée.

        Raises:
            QuadratureBudgetExceeded: Si le nombre de subdivisions est épuisé
        """
        d = complex(b) - complex(a)
        if d == 0:
            return 0.0

        def integrand(s: float) -> float:
            gx, gy = self.gradient(a + s * d)
            return gy * d.real - gx * d.imag

        limit = self.numerics.quad_limit
        result = integrate.quad(
            integrand, 0.0, 1.0,
            epsabs=1e-14 * (1.0 + abs(d)),
            epsrel=self.numerics.quad_rel_tol,
            limit=limit,
            full_output=1,
        )
        value, abserr, info = result[0], result[1], result[2]
        if info.get("last", 0) >= limit:
            raise QuadratureBudgetExceeded(
                f"segment quadrature did not converge in {limit} subdivisions (error estimate {abserr:.3e})"
            )
        if len(result) > 3:
            self.logger.debug(f"quad warning on segment {a} -> {b}: {result[3]}")
        return float(value)

    def segment_twists(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """segment_twist appliqué élément par élément."""
        a = np.ravel(np.asarray(a, dtype=complex))
        b = np.ravel(np.asarray(b, dtype=complex))
        return np.array([self.segment_twist(p, q) for p, q in zip(a, b)])

    def path_twist(self, vertices: Sequence[complex], closed: bool = False) -> float:
        """Somme des intégrales de segment le long d'une ligne polygonale."""
        z = np.asarray(vertices, dtype=complex)
        if closed:
            starts, ends = z, np.roll(z, -1)
        else:
            starts, ends = z[:-1], z[1:]
        if starts.size == 0:
            return 0.0
        return float(np.sum(self.segment_twists(starts, ends)))

    def t_offset(self, z0: complex, z1: complex, regime: str = "large", m: int = 2) -> float:
        """
        Correction verticale T entre deux points de base.

        Régime 'large' : 2 Im(∫_0^1 (z0 − z1) ∂_zP(z0 + (z1 − z0)s) ds), qui est
        exactement l'intégrale de segment z0 → z1. Régime 'small' : somme de
        Taylor d'ordre m en z1.
        """
        if z0 == z1:
            return 0.0
        if regime == "large":
            return self.segment_twist(z0, z1)
        if regime == "small":
            derivatives = self.dz_derivatives(z1, m)
            delta = z0 - z1
            total = 0j
            for k, dk in enumerate(derivatives, start=1):
                total += dk * delta ** k / math.factorial(k)
            return 2.0 * total.imag
        raise InvalidArgument(f"unknown regime '{regime}', expected 'large' or 'small'")

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.describe().items() if k != "kind")
        return f"{type(self).__name__}({params})"
