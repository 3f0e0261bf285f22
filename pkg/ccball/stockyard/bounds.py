"""
Encadrement de Λ(p0, δ) : borne inférieure par optimisation et Monte Carlo,
borne supérieure C₂(δ + δ²).
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

from ..controls.sampling import mc_lower_bound
from ..core.exceptions import InvalidArgument
from ..potentials.base import PotentialField
from .optimizer import optimize

logger = logging.getLogger("ccball.stockyard")

DEFAULT_MC_SAMPLES = 32
C2_GRID = 5


@dataclass(frozen=True)
class LambdaBracket:
    """Encadrement lower ≤ Λ(p0, δ) ≤ upper et ses composantes."""

    delta: float
    lower: float
    upper: float
    c2: float
    stockyard_value: float
    mc_value: float

    def to_dict(self):
        return asdict(self)


def upper_bound(field: PotentialField, z0: complex, delta: float, c2: float) -> float:
    """C₂(δ + δ²) : chaque enclos R_i est contenu dans une boule de rayon P(R_i) ≤ δ."""
    if c2 < 0 or not math.isfinite(c2):
        raise InvalidArgument(f"c2 must be a finite nonnegative constant, got {c2}")
    return c2 * (delta + delta * delta)


def estimate_c2(field: PotentialField, z0: complex, delta: float, grid_n: int = C2_GRID) -> float:
    """C₂ empirique sur une fenêtre de demi-côté δ centrée en z0."""
    from ..ugs.density import check_upper_density

    half = max(delta, 1.0)
    window = (z0.real - half, z0.imag - half, z0.real + half, z0.imag + half)
    return check_upper_density(field, window, 10.0 * max(delta, 1.0), grid_n)


def lambda_lower(field: PotentialField, z0: complex, delta: float, budget: int = 1_000_000, seed: int = 0,
                 strategy: str = "best", mc_samples: int = DEFAULT_MC_SAMPLES) -> float:
    """max(optimize, mc_lower_bound) ; mc_samples = 0 désactive le Monte Carlo."""
    _, found = optimize(field, z0, delta, strategy, budget, seed)
    sampled = mc_lower_bound(field, z0, delta, mc_samples, seed) if mc_samples > 0 else 0.0
    return max(found, sampled)


def lambda_bracket(field: PotentialField, z0: complex, delta: float, budget: int = 1_000_000, seed: int = 0,
                   c2: Optional[float] = None, strategy: str = "best",
                   mc_samples: int = DEFAULT_MC_SAMPLES) -> LambdaBracket:
    """
    Encadrement complet de Λ(p0, δ).

    Args:
        c2: Constante de densité supérieure ; estimée localement si None

    Returns:
        LambdaBracket avec lower ≤ upper
    """
    z0 = complex(z0)
    _, found = optimize(field, z0, delta, strategy, budget, seed)
    sampled = mc_lower_bound(field, z0, delta, mc_samples, seed) if mc_samples > 0 else 0.0
    lower = max(found, sampled)

    if c2 is None:
        c2 = estimate_c2(field, z0, delta)
    upper = upper_bound(field, z0, delta, c2)
    if lower > upper:
        logger.warning(f"lower bound {lower:.6g} exceeds c2 bound {upper:.6g} at delta={delta}; "
                       f"sampled c2={c2:.6g} underestimates the supremum")
        upper = lower
    return LambdaBracket(delta=delta, lower=lower, upper=upper, c2=c2,
                         stockyard_value=found, mc_value=sampled)


def lambda_estimate(field: PotentialField, z0: complex, delta: float, budget: int = 1_000_000,
                    seed: int = 0, **kwargs):
    """(lower, upper) pour Λ(p0, δ)."""
    bracket = lambda_bracket(field, z0, delta, budget, seed, **kwargs)
    return bracket.lower, bracket.upper


def lambda_profile(field: PotentialField, z0: complex, deltas: Sequence[float], budget: int = 1_000_000,
                   seed: int = 0, c2: Optional[float] = None, strategy: str = "best",
                   mc_samples: int = DEFAULT_MC_SAMPLES) -> List[LambdaBracket]:
    """
    Encadrements sur une échelle de δ croissante, enveloppe monotone appliquée.

    Tout (z, δ)-stockyard est un (z, δ′)-stockyard pour δ′ ≥ δ : les bornes
    inférieures sont prolongées vers la droite, les bornes supérieures vers
    la gauche.
    """
    if not deltas:
        return []
    ordered = sorted(float(d) for d in deltas)
    if ordered[0] <= 0:
        raise InvalidArgument(f"deltas must be positive, got {ordered[0]}")
    if c2 is None:
        c2 = estimate_c2(field, complex(z0), ordered[-1])

    raw = [lambda_bracket(field, z0, d, budget, seed, c2, strategy, mc_samples) for d in ordered]
    lowers = [b.lower for b in raw]
    for i in range(1, len(lowers)):
        lowers[i] = max(lowers[i], lowers[i - 1])
    uppers = [b.upper for b in raw]
    for i in range(len(uppers) - 2, -1, -1):
        uppers[i] = min(uppers[i], uppers[i + 1])

    return [
        LambdaBracket(delta=b.delta, lower=lo, upper=max(up, lo), c2=b.c2,
                      stockyard_value=b.stockyard_value, mc_value=b.mc_value)
        for b, lo, up in zip(raw, lowers, uppers)
    ]
