"""
Contrôles constants par morceaux (α, β) sur [0, 1] et points de bΩ ≅ ℂ × ℝ.
"""

import json
import math
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence

import numpy as np

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidArgument, InvalidControl


@dataclass(frozen=True)
class BoundaryPoint:
    """Point (z, t) de bΩ : z = x + iy est la coordonnée z₁, t = Re z₂."""

    z: complex
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "t", float(self.t))
        if not (math.isfinite(self.z.real) and math.isfinite(self.z.imag) and math.isfinite(self.t)):
            raise InvalidArgument(f"boundary point must have finite coordinates, got ({self.z}, {self.t})")

    @classmethod
    def from_xyt(cls, x: float, y: float, t: float = 0.0) -> "BoundaryPoint":
        return cls(complex(x, y), t)

    @property
    def x(self) -> float:
        return self.z.real

    @property
    def y(self) -> float:
        return self.z.imag

    def as_tuple(self):
        return (self.z.real, self.z.imag, self.t)


def project_mean_zero(breakpoints: Sequence[float], alpha: Sequence[float], beta: Sequence[float],
                      numerics: NumericSettings = DEFAULT_NUMERICS):
    """
    Retire les moyennes pondérées de α et β puis ramène la vitesse maximale
    sous 1 − marge si nécessaire.

    Returns:
        (alpha, beta) projetés, en tableaux numpy
    """
    widths = np.diff(np.asarray(breakpoints, dtype=float))
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    alpha = alpha - np.dot(widths, alpha)
    beta = beta - np.dot(widths, beta)
    cap = 1.0 - numerics.speed_margin
    top = float(np.max(np.hypot(alpha, beta))) if alpha.size else 0.0
    if top > cap:
        alpha = alpha * (cap / top)
        beta = beta * (cap / top)
    return alpha, beta


@dataclass(frozen=True, eq=False)
class ControlPair:
    """
    Contrôle (α, β) constant sur chaque intervalle [s_j, s_{j+1}).

    Invariants vérifiés à la construction : 0 = s_0 < … < s_K = 1,
    α_j² + β_j² ≤ 1 − marge, et moyennes nulles si mean_zero est demandé.
    """

    breakpoints: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    mean_zero: bool = False
    numerics: NumericSettings = DEFAULT_NUMERICS

    def __post_init__(self):
        s = np.array(self.breakpoints, dtype=float)
        a = np.array(self.alpha, dtype=float)
        b = np.array(self.beta, dtype=float)

        if s.ndim != 1 or s.size < 2:
            raise InvalidControl("control needs at least one interval")
        if a.shape != (s.size - 1,) or b.shape != (s.size - 1,):
            raise InvalidControl(
                f"expected {s.size - 1} values for alpha and beta, got {a.size} and {b.size}"
            )
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidControl("control values must be finite")
        if s[0] != 0.0 or s[-1] != 1.0:
            raise InvalidControl(f"breakpoints must run from 0 to 1, got [{s[0]}, {s[-1]}]")
        if np.any(np.diff(s) <= 0.0):
            raise InvalidControl("breakpoints must be strictly increasing")

        cap = 1.0 - self.numerics.speed_margin
        speed = np.hypot(a, b)
        if np.any(speed > cap + 1e-15):
            j = int(np.argmax(speed))
            raise InvalidControl(f"speed {speed[j]:.12g} on interval {j} violates alpha^2 + beta^2 < 1")

        if self.mean_zero:
            widths = np.diff(s)
            ma, mb = float(np.dot(widths, a)), float(np.dot(widths, b))
            tol = self.numerics.mean_zero_tol
            if abs(ma) > tol or abs(mb) > tol:
                raise InvalidControl(f"control is not mean-zero (means {ma:.3e}, {mb:.3e})")

        for name, arr in (("breakpoints", s), ("alpha", a), ("beta", b)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def constant(cls, alpha: float, beta: float, **kwargs) -> "ControlPair":
        return cls(np.array([0.0, 1.0]), np.array([alpha]), np.array([beta]), **kwargs)

    @classmethod
    def mean_zero_from(cls, breakpoints: Sequence[float], alpha: Sequence[float], beta: Sequence[float],
                       numerics: NumericSettings = DEFAULT_NUMERICS) -> "ControlPair":
        """Construit un contrôle de 𝒳* par projection (moyenne nulle, vitesse bornée)."""
        a, b = project_mean_zero(breakpoints, alpha, beta, numerics)
        return cls(np.asarray(breakpoints, dtype=float), a, b, mean_zero=True, numerics=numerics)

    @property
    def segments(self) -> int:
        return int(self.alpha.size)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def speeds(self) -> np.ndarray:
        return np.hypot(self.alpha, self.beta)

    def means(self):
        w = self.widths
        return float(np.dot(w, self.alpha)), float(np.dot(w, self.beta))

    def reversed(self) -> "ControlPair":
        """Renversement du temps : même trajectoire parcourue en sens inverse."""
        s = 1.0 - self.breakpoints[::-1]
        s[0], s[-1] = 0.0, 1.0
        return ControlPair(s, -self.alpha[::-1], -self.beta[::-1],
                           mean_zero=self.mean_zero, numerics=self.numerics)

    def concatenate(self, other: "ControlPair") -> "ControlPair":
        """
        Enchaîne deux contrôles en divisant le temps par deux.

        À l'échelle 2δ, le résultat parcourt self puis other, chacun à l'échelle δ.
        """
        s = np.concatenate([0.5 * self.breakpoints, 0.5 + 0.5 * other.breakpoints[1:]])
        s[-1] = 1.0
        return ControlPair(
            s,
            np.concatenate([self.alpha, other.alpha]),
            np.concatenate([self.beta, other.beta]),
            mean_zero=self.mean_zero and other.mean_zero,
            numerics=self.numerics,
        )

    def to_json(self) -> List[List[float]]:
        """Liste [s_j, α_j, β_j] par intervalle (s_K = 1 implicite)."""
        return [[float(s), float(a), float(b)]
                for s, a, b in zip(self.breakpoints[:-1], self.alpha, self.beta)]

    @classmethod
    def from_json(cls, data: Any, mean_zero: Optional[bool] = None,
                  numerics: NumericSettings = DEFAULT_NUMERICS) -> "ControlPair":
        """
        Relit un contrôle sérialisé par to_json.

        Args:
            data: Liste de triplets [s_j, α_j, β_j], ou chaîne JSON
            mean_zero: Drapeau imposé ; détecté automatiquement si None

        Raises:
            InvalidControl: Si la structure ou les invariants sont invalides
        """
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise InvalidControl(f"invalid control JSON: {e}")
        if not isinstance(data, list) or not data:
            raise InvalidControl("control must be a non-empty list of [s, alpha, beta]")
        rows = []
        for row in data:
            if not isinstance(row, (list, tuple)) or len(row) != 3:
                raise InvalidControl(f"control entry must be [s, alpha, beta], got {row!r}")
            try:
                rows.append([float(v) for v in row])
            except (TypeError, ValueError):
                raise InvalidControl(f"control entry must be numeric, got {row!r}")
        table = np.array(rows)
        s = np.append(table[:, 0], 1.0)
        alpha, beta = table[:, 1], table[:, 2]
        if mean_zero is None:
            widths = np.diff(s)
            tol = numerics.mean_zero_tol
            mean_zero = bool(abs(np.dot(widths, alpha)) <= tol and abs(np.dot(widths, beta)) <= tol)
        return cls(s, alpha, beta, mean_zero=mean_zero, numerics=numerics)

    def __repr__(self) -> str:
        return f"ControlPair(segments={self.segments}, mean_zero={self.mean_zero})"
