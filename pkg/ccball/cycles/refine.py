"""
Insertion des points d'auto-intersection d'une boucle polygonale.

Tests d'orientation O(n²) sur toutes les paires d'arêtes. Les situations
non génériques (contact en un sommet, chevauchement colinéaire, point
triple, demi-tour) sont levées par une perturbation déterministe des
sommets autres que la base.
"""

import hashlib
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..core.config import DEFAULT_NUMERICS, NumericSettings
from ..core.exceptions import DegenerateAfterPerturbation
from .loops import PolyLoop

logger = logging.getLogger("ccball.cycles")

# Tolérance de détection relative à ε_gp
DETECTION_FACTOR = 1e-3


class _Degenerate(Exception):
    pass


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _find_crossings(z: np.ndarray, tol: float) -> Dict[int, List[Tuple[float, complex]]]:
    """Croisements propres par arête ; lève _Degenerate sur toute situation non générique."""
    n = z.size
    starts = z
    ends = np.roll(z, -1)
    crossings: Dict[int, List[Tuple[float, complex]]] = {}
    points: List[complex] = []

    for i in range(n):
        p, r = complex(starts[i]), complex(ends[i] - starts[i])
        lr = abs(r)
        # demi-tour sur l'arête suivante
        nxt = complex(ends[(i + 1) % n] - starts[(i + 1) % n])
        if abs(_cross(r, nxt)) <= tol * abs(nxt) and (r.conjugate() * nxt).real < 0:
            raise _Degenerate(f"edge {i} backtracks")

        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            q, s = complex(starts[j]), complex(ends[j] - starts[j])
            ls = abs(s)
            denom = _cross(r, s)
            qp = q - p
            if abs(denom) <= tol * lr * ls / max(lr, ls):
                if abs(_cross(qp, r)) <= tol * lr:
                    t0 = (qp.conjugate() * r).real / (lr * lr)
                    t1 = ((qp + s).conjugate() * r).real / (lr * lr)
                    if max(t0, t1) >= -tol / lr and min(t0, t1) <= 1.0 + tol / lr:
                        raise _Degenerate(f"edges {i} and {j} overlap")
                continue
            t = _cross(qp, s) / denom
            u = _cross(qp, r) / denom
            et, eu = tol / lr, tol / ls
            if t < -et or t > 1.0 + et or u < -eu or u > 1.0 + eu:
                continue
            if t <= et or t >= 1.0 - et or u <= eu or u >= 1.0 - eu:
                raise _Degenerate(f"edges {i} and {j} touch at a vertex")
            x = p + t * r
            crossings.setdefault(i, []).append((t, x))
            crossings.setdefault(j, []).append((u, x))
            points.append(x)

    if len(points) > 1:
        xy = np.column_stack([np.real(points), np.imag(points)])
        if cKDTree(xy).query_pairs(tol):
            raise _Degenerate("triple point")
    return crossings


def _jitter(vertices: np.ndarray, base_index: int, eps: float, attempt: int) -> np.ndarray:
    digest = hashlib.sha256(vertices.tobytes() + attempt.to_bytes(4, "little")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    radius = eps * np.sqrt(rng.random(vertices.size))
    angle = 2.0 * np.pi * rng.random(vertices.size)
    shift = radius * np.exp(1j * angle)
    shift[base_index] = 0.0
    return vertices + shift


def refine_intersections(loop: PolyLoop, eps_gp: Optional[float] = None,
                         numerics: NumericSettings = DEFAULT_NUMERICS) -> PolyLoop:
    """
    Insère chaque point d'intersection d'arêtes comme sommet (une fois par passage).

    Args:
        loop: Boucle valide
        eps_gp: Amplitude de perturbation ; 1e-9 × diamètre par défaut

    Returns:
        Boucle raffinée, même ensemble de points (aux perturbations près)

    Raises:
        DegenerateAfterPerturbation: Si la position générale n'est pas
            atteinte après les tentatives configurées
    """
    if eps_gp is None:
        eps_gp = numerics.eps_gp_factor * loop.diameter()
    tol = DETECTION_FACTOR * eps_gp

    vertices = loop.vertices
    for attempt in range(numerics.jitter_attempts + 1):
        try:
            crossings = _find_crossings(vertices, tol)
            break
        except _Degenerate as e:
            if attempt == numerics.jitter_attempts:
                raise DegenerateAfterPerturbation(
                    f"loop still degenerate after {numerics.jitter_attempts} jitter attempts: {e}"
                )
            logger.warning(f"Degenerate loop ({e}), jitter attempt {attempt + 1}")
            vertices = _jitter(loop.vertices, loop.base_index, eps_gp, attempt)

    out: List[complex] = []
    params: List[float] = []
    base_index = 0
    for i, v in enumerate(vertices):
        if i == loop.base_index:
            base_index = len(out)
        start = float(loop.params[i])
        stop = float(loop.params[i + 1]) if i + 1 < loop.size else float(loop.size)
        out.append(complex(v))
        params.append(start)
        for t, x in sorted(crossings.get(i, []), key=lambda c: c[0]):
            out.append(x)
            params.append(start + t * (stop - start))

    logger.debug(f"refine_intersections: {loop.size} -> {len(out)} vertices "
                 f"({sum(len(c) for c in crossings.values()) // 2} crossings)")
    return PolyLoop(np.array(out), base_index=base_index, params=np.array(params), refined=True)
