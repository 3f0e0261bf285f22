"""
Enclos (pens), stockyards et leur validation.

Un stockyard ancré en z0 est une suite d'enclos, répétitions comprises,
dont la clôture totale est bornée par δ et dont la réunion des bords est
connexe et contient z0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import InvalidArgument, InvalidStockyard
from ..core.geometry import (
    circle_circle_distance,
    circle_ring_distance,
    ensure_simple_polygon,
    point_ring_distance,
    polygon_perimeter,
    ring_ring_distance,
)
from ..potentials.base import PotentialField

logger = logging.getLogger("ccball.stockyard")

FENCING_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Pen:
    """Région simple : disque (center, radius) ou polygone (vertices)."""

    shape: str
    center: complex = 0j
    radius: float = 0.0
    vertices: Optional[Tuple[complex, ...]] = None

    def __post_init__(self):
        if self.shape == "disc":
            if not (self.radius > 0 and math.isfinite(self.radius)):
                raise InvalidArgument(f"disc pen needs a positive radius, got {self.radius}")
        elif self.shape == "polygon":
            ensure_simple_polygon(list(self.vertices or ()))
        else:
            raise InvalidArgument(f"unknown pen shape '{self.shape}'")

    @classmethod
    def disc(cls, center: complex, radius: float) -> "Pen":
        return cls("disc", center=complex(center), radius=float(radius))

    @classmethod
    def polygon(cls, vertices: Sequence[complex]) -> "Pen":
        return cls("polygon", vertices=tuple(complex(v) for v in vertices))

    @classmethod
    def connector(cls, start: complex, end: complex, width: float) -> "Pen":
        """Rectangle fin de start à end ; start et end sont au milieu des petits côtés."""
        d = complex(end) - complex(start)
        if abs(d) == 0.0:
            raise InvalidArgument("connector needs distinct endpoints")
        normal = 1j * d / abs(d) * (width / 2.0)
        return cls.polygon([start - normal, end - normal, end + normal, start + normal])

    @property
    def perimeter(self) -> float:
        """Clôture utilisée ; 2πr exact pour un disque."""
        if self.shape == "disc":
            return 2.0 * math.pi * self.radius
        return polygon_perimeter(self.vertices)

    def mass(self, field: PotentialField) -> float:
        if self.shape == "disc":
            return field.ball_mass(self.center, self.radius)
        return field.region_mass(list(self.vertices))

    def boundary_distance(self, z: complex) -> float:
        if self.shape == "disc":
            return abs(abs(z - self.center) - self.radius)
        return point_ring_distance(z, self.vertices)

    def distance_to(self, other: "Pen") -> float:
        """Distance entre les bords des deux enclos."""
        if self.shape == "disc" and other.shape == "disc":
            return circle_circle_distance(self.center, self.radius, other.center, other.radius)
        if self.shape == "disc":
            return circle_ring_distance(self.center, self.radius, other.vertices)
        if other.shape == "disc":
            return circle_ring_distance(other.center, other.radius, self.vertices)
        return ring_ring_distance(self.vertices, other.vertices)

    def to_json(self) -> Dict[str, Any]:
        if self.shape == "disc":
            return {
                "shape": "disc",
                "center": [self.center.real, self.center.imag],
                "radius": self.radius,
                "perimeter": self.perimeter,
            }
        return {
            "shape": "polygon",
            "vertices": [[v.real, v.imag] for v in self.vertices],
            "perimeter": self.perimeter,
        }


@dataclass(frozen=True)
class PenEntry:
    """Un enclos répété count fois."""

    pen: Pen
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise InvalidArgument(f"pen multiplicity must be >= 1, got {self.count}")


@dataclass(frozen=True)
class Stockyard:
    anchor: complex
    budget: float
    entries: Tuple[PenEntry, ...] = ()

    @property
    def fencing(self) -> float:
        return sum(e.count * e.pen.perimeter for e in self.entries)

    @property
    def pen_count(self) -> int:
        return sum(e.count for e in self.entries)

    def to_json(self, value: Optional[float] = None) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "anchor": [self.anchor.real, self.anchor.imag],
            "budget": self.budget,
            "fencing": self.fencing,
            "pens": [dict(e.pen.to_json(), count=e.count) for e in self.entries],
        }
        if value is not None:
            data["value"] = value
        return data


@dataclass
class StockyardCheck:
    """Résultat de validation ; vrai si toutes les conditions tiennent."""

    ok: bool
    diagnostics: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate(s: Stockyard, eps_conn: Optional[float] = None,
             numerics: NumericSettings = DEFAULT_NUMERICS) -> StockyardCheck:
    """
    Vérifie l'ancrage, le budget de clôture et la connexité des bords.

    Les distances entre bords sont exactes (disques et polygones), sans
    échantillonnage.
    """
    if eps_conn is None:
        eps_conn = numerics.eps_conn_factor * s.budget
    diagnostics: List[str] = []

    if not s.entries:
        return StockyardCheck(False, ["stockyard has no pens"])
    if not s.budget > 0:
        diagnostics.append(f"budget must be positive, got {s.budget}")

    pens = [e.pen for e in s.entries]
    anchor_gaps = [p.boundary_distance(s.anchor) for p in pens]
    if min(anchor_gaps) > eps_conn:
        diagnostics.append(f"anchor is {min(anchor_gaps):.3e} away from every pen boundary (eps_conn={eps_conn:.3e})")

    fencing = s.fencing
    if fencing > s.budget * (1.0 + FENCING_SLACK):
        diagnostics.append(f"fencing {fencing:.12g} exceeds budget {s.budget:.12g}")

    graph = nx.Graph()
    graph.add_nodes_from(range(len(pens)))
    for i in range(len(pens)):
        for j in range(i + 1, len(pens)):
            if pens[i].distance_to(pens[j]) <= eps_conn:
                graph.add_edge(i, j)
    if not nx.is_connected(graph):
        parts = nx.number_connected_components(graph)
        diagnostics.append(f"pen boundaries are disconnected ({parts} components)")

    for message in diagnostics:
        logger.debug(f"validate: {message}")
    return StockyardCheck(not diagnostics, diagnostics)


def value(field: PotentialField, s: Stockyard, numerics: Optional[NumericSettings] = None) -> float:
    """
    Σ_i ∫_{R_i} ΔP, enclos répétés comptés avec leur multiplicité.

    Raises:
        InvalidStockyard: Si le stockyard ne passe pas la validation
    """
    check = validate(s, numerics=numerics or field.numerics)
    if not check:
        raise InvalidStockyard("; ".join(check.diagnostics))
    return float(sum(e.count * e.pen.mass(field) for e in s.entries))
