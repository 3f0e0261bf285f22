"""
Décomposition d'une boucle raffinée en cycles simples disjoints en arêtes,
et masses de Green associées.
"""

import logging
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import NotEulerian
from ..core.geometry import DEGENERATE_AREA_FACTOR, shoelace_area
from ..potentials.base import PotentialField
from .loops import PolyLoop, SimpleCycle
from .refine import DETECTION_FACTOR, refine_intersections

logger = logging.getLogger("ccball.cycles")


def _vertex_ids(vertices: np.ndarray, eps: float) -> np.ndarray:
    """Identifie les sommets à moins de eps les uns des autres."""
    xy = np.column_stack([vertices.real, vertices.imag])
    graph = nx.Graph()
    graph.add_nodes_from(range(vertices.size))
    graph.add_edges_from(cKDTree(xy).query_pairs(eps))
    ids = np.empty(vertices.size, dtype=int)
    for label, component in enumerate(sorted(nx.connected_components(graph), key=min)):
        ids[list(component)] = label
    return ids


def _provenance(edge_indices: List[int], params: np.ndarray) -> List[Tuple[float, float]]:
    """Fusionne les arêtes consécutives en intervalles de paramètre de la boucle d'origine."""
    runs: List[Tuple[int, int]] = []
    for e in sorted(edge_indices):
        if runs and runs[-1][1] == e:
            runs[-1] = (runs[-1][0], e + 1)
        else:
            runs.append((e, e + 1))
    end = float(np.floor(params[-1])) + 1.0
    return [(float(params[a]), float(params[b]) if b < params.size else end) for a, b in runs]


def decompose(loop: PolyLoop, numerics: NumericSettings = DEFAULT_NUMERICS) -> List[SimpleCycle]:
    """
    Décompose une boucle en cycles simples orientés, disjoints en arêtes.

    Parcourt les arêtes dans l'ordre de la courbe depuis la base en
    maintenant une pile de sommets ; revisiter un sommet de la pile détache
    le cycle enfermé.

    Raises:
        NotEulerian: Si le graphe orienté de la boucle n'est pas eulérien
    """
    if not loop.refined:
        loop = refine_intersections(loop, numerics=numerics)

    # même tolérance que la détection des contacts dans refine_intersections
    eps = DETECTION_FACTOR * numerics.eps_gp_factor * loop.diameter()
    ids = _vertex_ids(loop.vertices, eps)
    n = loop.size

    graph = nx.MultiDiGraph()
    graph.add_edges_from((int(ids[i]), int(ids[(i + 1) % n])) for i in range(n))
    if not nx.is_eulerian(graph):
        raise NotEulerian(f"refined loop graph with {graph.number_of_nodes()} vertices is not Eulerian")

    order = [(loop.base_index + k) % n for k in range(n)]
    start = order[0]
    stack: List[int] = [start]
    arrived_by: List[int] = [-1]
    position: Dict[int, int] = {int(ids[start]): 0}

    cycles: List[SimpleCycle] = []
    sliver_limit = DEGENERATE_AREA_FACTOR * loop.diameter() ** 2
    slivers = 0
    for edge in order:
        target = (edge + 1) % n
        key = int(ids[target])
        if key not in position:
            position[key] = len(stack)
            stack.append(target)
            arrived_by.append(edge)
            continue

        cut = position[key]
        members = stack[cut:]
        edges = arrived_by[cut + 1:] + [edge]
        for vertex in stack[cut + 1:]:
            del position[int(ids[vertex])]
        del stack[cut + 1:]
        del arrived_by[cut + 1:]

        vertices = loop.vertices[members]
        area = shoelace_area(vertices)
        degenerate = len(members) < 3 or abs(area) <= sliver_limit
        slivers += int(degenerate)
        cycles.append(SimpleCycle(
            vertices=vertices,
            orientation="cw" if area < 0 else "ccw",
            provenance=_provenance(edges, loop.params),
            degenerate=degenerate,
        ))

    if slivers:
        logger.debug(f"decompose: {slivers} cycle(s) below area resolution kept as degenerate")
    logger.debug(f"decompose: {n} edges -> {len(cycles)} cycles")
    return cycles


def signed_mass(field: PotentialField, cycle: SimpleCycle) -> float:
    """
    +∫_R ΔP pour un cycle horaire, −∫_R ΔP pour un cycle trigonométrique.

    Un cycle dégénéré reçoit −ΔP(barycentre)·aire signée, nul pour un aller-retour.
    """
    if cycle.degenerate:
        if cycle.vertices.size < 3:
            return 0.0
        return -field.laplacian(complex(np.mean(cycle.vertices))) * cycle.area
    mass = field.region_mass(list(cycle.vertices))
    return mass if cycle.orientation == "cw" else -mass


def loop_integral(field: PotentialField, loop: PolyLoop) -> float:
    """∮ ∂yP dx − ∂xP dy le long de la boucle fermée."""
    return field.path_twist(loop.vertices, closed=True)


def cycle_upper_witness(field: PotentialField, loop: PolyLoop,
                        numerics: NumericSettings = DEFAULT_NUMERICS) -> float:
    """Σ max(signed_mass, 0) sur la décomposition de la boucle."""
    cycles = decompose(loop, numerics)
    return sum(max(signed_mass(field, c), 0.0) for c in cycles)
