"""
Recherche de stockyards de grande valeur : bornes inférieures certifiées de Λ(p0, δ).

Stratégies :
    single_circle  un disque dont le bord passe par z0
    disc_chain     une boule cible atteinte par un connecteur fin, puis
                   répétée avec la clôture restante
    greedy_multi   plusieurs boules cibles reliées à z0 en étoile
    best           maximum des trois
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize as sopt

from ..core.config import NumericSettings
from ..core.exceptions import InvalidArgument, InvalidStockyard
from ..potentials.base import PotentialField
from .pens import Pen, PenEntry, Stockyard, validate, value

logger = logging.getLogger("ccball.stockyard")

STRATEGIES = ("single_circle", "disc_chain", "greedy_multi", "best")
DIRECTION_STARTS = 8
RANDOM_STARTS = 4


@dataclass(frozen=True)
class Candidate:
    """Boule cible B(center, radius) et sa masse."""

    center: complex
    radius: float
    mass: float

    @property
    def efficiency(self) -> float:
        return self.mass / (2.0 * math.pi * self.radius)


class _Plan:
    """Géométrie de la connexion z0 → bord d'une boule cible."""

    def __init__(self, z0: complex, delta: float, numerics: NumericSettings):
        self.z0 = z0
        self.delta = delta
        self.eps_conn = numerics.eps_conn_factor * delta
        self.width = numerics.connector_width_factor * delta

    def gap(self, center: complex, radius: float) -> float:
        return abs(abs(center - self.z0) - radius)

    def connector_cost(self, center: complex, radius: float) -> float:
        gap = self.gap(center, radius)
        if gap <= self.eps_conn / 2.0:
            return 0.0
        return 2.0 * gap + 2.0 * self.width

    def connector(self, center: complex, radius: float) -> Optional[Pen]:
        if self.gap(center, radius) <= self.eps_conn / 2.0:
            return None
        offset = self.z0 - center
        direction = offset / abs(offset) if abs(offset) > 0 else 1.0 + 0j
        return Pen.connector(self.z0, center + radius * direction, self.width)

    def copies(self, center: complex, radius: float, fencing: Optional[float] = None) -> int:
        remaining = (self.delta if fencing is None else fencing) - self.connector_cost(center, radius)
        if remaining <= 0:
            return 0
        # tolérance relative alignée sur celle de validate
        return int(math.floor(remaining * (1.0 + 1e-13) / (2.0 * math.pi * radius)))

    def chain_score(self, candidate: Candidate) -> float:
        return self.copies(candidate.center, candidate.radius) * candidate.mass


def _scan_candidates(field: PotentialField, z0: complex, delta: float, eval_budget: int) -> List[Candidate]:
    """Boules candidates : grille sur B(z0, δ/2) × octaves de rayon, plus les concentrations connues."""
    numerics = field.numerics
    octaves = numerics.scan_octaves
    n = numerics.scan_grid
    affordable = max(2, int(math.sqrt(max(eval_budget, 1) / octaves)))
    if affordable < n:
        logger.warning(f"scan grid reduced from {n} to {affordable} to respect eval_budget={eval_budget}")
        n = affordable

    reach = delta / 2.0
    offsets = np.linspace(-reach, reach, n)
    X, Y = np.meshgrid(offsets, offsets)
    sites = z0 + (X + 1j * Y).ravel()
    sites = sites[np.abs(sites - z0) <= reach * (1.0 + 1e-12)]

    rho_max = delta / (2.0 * math.pi)
    candidates: List[Candidate] = []
    for o in range(octaves):
        rho = rho_max * 2.0 ** (-o)
        for c in sites:
            candidates.append(Candidate(complex(c), rho, field.ball_mass(complex(c), rho)))
    for center, radius in field.hotspots(z0, reach):
        if radius <= rho_max:
            candidates.append(Candidate(center, radius, field.ball_mass(center, radius)))
    logger.debug(f"scan: {len(candidates)} candidate balls around {z0} (delta={delta})")
    return candidates


def _refine(field: PotentialField, plan: _Plan, candidate: Candidate) -> Candidate:
    """Ajuste le rayon d'une boule cible à centre fixé (recherche bornée de Brent)."""
    rho_max = plan.delta / (2.0 * math.pi)
    lo, hi = candidate.radius / 2.0, min(2.0 * candidate.radius, rho_max)
    if not hi > lo:
        return candidate

    def objective(rho: float) -> float:
        return -plan.copies(candidate.center, rho) * field.ball_mass(candidate.center, rho)

    result = sopt.minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-6 * hi})
    rho = float(result.x)
    refined = Candidate(candidate.center, rho, field.ball_mass(candidate.center, rho))
    return refined if plan.chain_score(refined) > plan.chain_score(candidate) else candidate


def _finish(field: PotentialField, s: Stockyard, strategy: str) -> Tuple[Stockyard, float]:
    check = validate(s, numerics=field.numerics)
    if not check:
        raise InvalidStockyard(f"{strategy} built an invalid stockyard: {'; '.join(check.diagnostics)}")
    return s, value(field, s)


def single_circle(field: PotentialField, z0: complex, delta: float,
                  rng: np.random.Generator, eval_budget: int, candidates=None) -> Tuple[Stockyard, float]:
    """
    Un disque de rayon δ/2π dont le bord passe par z0.

    À direction fixée, les disques tangents en z0 sont emboîtés quand le
    rayon croît : seul l'angle est optimisé (départs multiples puis
    recherche locale bornée).
    """
    rho = delta / (2.0 * math.pi)

    def mass_at(theta: float) -> float:
        return field.ball_mass(z0 + rho * complex(math.cos(theta), math.sin(theta)), rho)

    starts = list(2.0 * math.pi * np.arange(DIRECTION_STARTS) / DIRECTION_STARTS)
    starts += [math.atan2((c - z0).imag, (c - z0).real) for c, _ in field.hotspots(z0, 2.0 * rho) if c != z0]
    starts += list(rng.uniform(0.0, 2.0 * math.pi, RANDOM_STARTS))
    scored = sorted(((mass_at(t), t) for t in starts), reverse=True)

    best_mass, best_theta = scored[0]
    half_width = math.pi / DIRECTION_STARTS
    if eval_budget > len(starts):
        for mass, theta in scored[:3]:
            result = sopt.minimize_scalar(lambda t: -mass_at(t), bounds=(theta - half_width, theta + half_width),
                                          method="bounded", options={"xatol": 1e-6})
            if -result.fun > best_mass:
                best_mass, best_theta = -float(result.fun), float(result.x)

    center = z0 + rho * complex(math.cos(best_theta), math.sin(best_theta))
    s = Stockyard(anchor=z0, budget=delta, entries=(PenEntry(Pen.disc(center, rho)),))
    return _finish(field, s, "single_circle")


def disc_chain(field: PotentialField, z0: complex, delta: float,
               rng: np.random.Generator, eval_budget: int,
               candidates: Optional[List[Candidate]] = None) -> Tuple[Stockyard, float]:
    """Connecteur vers la meilleure boule cible, puis ⌊(δ − connecteur)/2πρ⌋ copies de cette boule."""
    plan = _Plan(z0, delta, field.numerics)
    if candidates is None:
        candidates = _scan_candidates(field, z0, delta, eval_budget)
    candidates = [c for c in candidates if c.mass > 0]
    if not candidates:
        logger.info(f"disc_chain: no density within reach of {z0}, falling back to single_circle")
        return single_circle(field, z0, delta, rng, eval_budget)

    ranked = sorted(candidates, key=plan.chain_score, reverse=True)[:field.numerics.refine_top]
    refined = [_refine(field, plan, c) for c in ranked]
    target = max(refined, key=plan.chain_score)
    count = plan.copies(target.center, target.radius)
    if count < 1:
        return single_circle(field, z0, delta, rng, eval_budget)

    entries: List[PenEntry] = []
    connector = plan.connector(target.center, target.radius)
    if connector is not None:
        entries.append(PenEntry(connector))
    entries.append(PenEntry(Pen.disc(target.center, target.radius), count))
    s = Stockyard(anchor=z0, budget=delta, entries=tuple(entries))
    return _finish(field, s, "disc_chain")


def greedy_multi(field: PotentialField, z0: complex, delta: float,
                 rng: np.random.Generator, eval_budget: int,
                 candidates: Optional[List[Candidate]] = None) -> Tuple[Stockyard, float]:
    """
    Plusieurs boules disjointes reliées à z0 par des connecteurs en étoile ;
    la clôture restante répète la boule la plus efficace.
    """
    plan = _Plan(z0, delta, field.numerics)
    if candidates is None:
        candidates = _scan_candidates(field, z0, delta, eval_budget)
    candidates = sorted((c for c in candidates if c.mass > 0), key=lambda c: c.efficiency, reverse=True)
    chosen: List[Candidate] = []
    remaining = delta
    for c in candidates:
        if len(chosen) >= field.numerics.refine_top:
            break
        if any(abs(c.center - o.center) < c.radius + o.radius for o in chosen):
            continue
        cost = plan.connector_cost(c.center, c.radius) + 2.0 * math.pi * c.radius
        if cost <= remaining:
            chosen.append(c)
            remaining -= cost
    if not chosen:
        return single_circle(field, z0, delta, rng, eval_budget)

    counts = [1] * len(chosen)
    best = max(range(len(chosen)), key=lambda i: chosen[i].efficiency)
    extra = int(math.floor(remaining * (1.0 - 1e-13) / (2.0 * math.pi * chosen[best].radius)))
    counts[best] += max(extra, 0)

    entries: List[PenEntry] = []
    for c, count in zip(chosen, counts):
        connector = plan.connector(c.center, c.radius)
        if connector is not None:
            entries.append(PenEntry(connector))
        entries.append(PenEntry(Pen.disc(c.center, c.radius), count))
    s = Stockyard(anchor=z0, budget=delta, entries=tuple(entries))
    return _finish(field, s, "greedy_multi")


_STRATEGIES: Dict[str, Callable] = {
    "single_circle": single_circle,
    "disc_chain": disc_chain,
    "greedy_multi": greedy_multi,
}


def optimize(field: PotentialField, z0: complex, delta: float, strategy: str = "best",
             eval_budget: int = 1_000_000, seed: int = 0) -> Tuple[Stockyard, float]:
    """
    Construit un (z0, δ)-stockyard valide et sa valeur, borne inférieure de Λ(p0, δ).

    Args:
        strategy: single_circle, disc_chain, greedy_multi ou best
        eval_budget: Plafond d'évaluations de masse pour le balayage des candidats
        seed: Graine des redémarrages aléatoires

    Raises:
        InvalidArgument: Si δ ≤ 0 ou si la stratégie est inconnue
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidArgument(f"delta must be positive and finite, got {delta}")
    if strategy not in STRATEGIES:
        raise InvalidArgument(f"unknown strategy '{strategy}', expected one of {', '.join(STRATEGIES)}")

    z0 = complex(z0)
    names = list(_STRATEGIES) if strategy == "best" else [strategy]
    best: Optional[Tuple[Stockyard, float]] = None
    best_name = names[0]
    candidates = None
    if set(names) & {"disc_chain", "greedy_multi"}:
        candidates = _scan_candidates(field, z0, delta, eval_budget)
    for name in names:
        rng = np.random.default_rng(seed)
        result = _STRATEGIES[name](field, z0, delta, rng, eval_budget, candidates)
        logger.debug(f"optimize {name}: value={result[1]:.6g}")
        if best is None or result[1] > best[1]:
            best, best_name = result, name
    logger.info(f"optimize z0={z0} delta={delta}: {best_name} value={best[1]:.6g}")
    return best
