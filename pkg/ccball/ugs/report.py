"""
Ajustement de f(δ) ≈ δ^p sur les bornes de Λ et verdict UGS.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidArgument
from ..potentials.base import PotentialField, Window
from ..stockyard.bounds import DEFAULT_MC_SAMPLES, lambda_bracket
from .density import check_window, check_averages, check_lower_density, check_upper_density

logger = logging.getLogger("ccball.ugs")

VERDICTS = ("ugs_quadratic", "ugs_linear_like", "ugs_other", "no_ugs_evidence")
EXPONENT_SLACK = 0.2
UNIFORMITY_FACTOR = 4.0
AVERAGE_RATIO_LIMIT = 100.0
MIN_DELTAS = 4


@dataclass(frozen=True)
class FRow:
    delta: float
    lower: float
    upper: float


@dataclass
class UgsReport:
    """Constantes de densité, table f(δ) et verdict, avec les paramètres d'échantillonnage."""

    c1: float
    c2: float
    avg_ratio_lo: float
    avg_ratio_hi: float
    f_table: List[FRow] = field(default_factory=list)
    exponent: Optional[float] = None
    fit_residual: Optional[float] = None
    verdict: str = "no_ugs_evidence"
    density_bounded: bool = True
    uniform_in_z0: bool = False
    averages_uniform: bool = False
    grid_n: int = 5
    sampled_z0: List[complex] = field(default_factory=list)
    window: Optional[Window] = None
    delta0: Optional[float] = None

    def f_table_rows(self) -> List[Tuple[float, float, float]]:
        return [(r.delta, r.lower, r.upper) for r in self.f_table]

    def to_json(self) -> Dict[str, Any]:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "avg_ratio_lo": self.avg_ratio_lo,
            "avg_ratio_hi": self.avg_ratio_hi,
            "averages_uniform": self.averages_uniform,
            "density_bounded": self.density_bounded,
            "f_table": [[r.delta, r.lower, r.upper] for r in self.f_table],
            "exponent": self.exponent,
            "fit_residual": self.fit_residual,
            "uniform_in_z0": self.uniform_in_z0,
            "verdict": self.verdict,
            "grid_n": self.grid_n,
            "sampled_z0": [[z.real, z.imag] for z in self.sampled_z0],
            "window": list(self.window) if self.window else None,
            "delta0": self.delta0,
        }


def classify(exponent: Optional[float], uniform: bool) -> str:
    """Verdict à partir de l'exposant ajusté ; tout verdict ugs_* impose p ∈ [0.8, 2.2]."""
    if exponent is None or not uniform or not math.isfinite(exponent):
        return "no_ugs_evidence"
    if abs(exponent - 2.0) <= EXPONENT_SLACK:
        return "ugs_quadratic"
    if abs(exponent - 1.0) <= EXPONENT_SLACK:
        return "ugs_linear_like"
    if 1.0 - EXPONENT_SLACK <= exponent <= 2.0 + EXPONENT_SLACK:
        return "ugs_other"
    return "no_ugs_evidence"


def sample_base_points(window: Window, count: int, seed: int) -> List[complex]:
    """Centre puis coins de la fenêtre, complétés par des points uniformes tirés avec la graine."""
    x0, y0, x1, y1 = check_window(window)
    fixed = [complex((x0 + x1) / 2.0, (y0 + y1) / 2.0),
             complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    if count <= len(fixed):
        return fixed[:count]
    rng = np.random.default_rng(seed)
    extra = rng.uniform((x0, y0), (x1, y1), size=(count - len(fixed), 2))
    return fixed + [complex(x, y) for x, y in extra]


def _check_deltas(deltas: Sequence[float]) -> List[float]:
    ordered = sorted(float(d) for d in deltas)
    if len(ordered) < MIN_DELTAS:
        raise InvalidArgument(f"fit_ugs needs at least {MIN_DELTAS} deltas, got {len(ordered)}")
    if ordered[0] <= 0:
        raise InvalidArgument(f"deltas must be positive, got {ordered[0]}")
    if ordered[-1] < 10.0 * ordered[0]:
        logger.warning(f"deltas span less than one decade ([{ordered[0]}, {ordered[-1]}]); "
                       "the fitted exponent is loose")
    return ordered


def fit_ugs(field: PotentialField, window: Window, deltas: Sequence[float], budget: int = 1_000_000,
            seed: int = 0, grid_n: int = 5, z0_samples: int = 5, strategy: str = "best",
            mc_samples: int = DEFAULT_MC_SAMPLES) -> UgsReport:
    """
    Vérifie les conditions de densité puis ajuste log f contre log δ.

    f(δ) est le maximum sur les z0 échantillonnés des bornes inférieures de
    Λ ; l'uniformité en z0 exige min ≥ max/4 à chaque δ.

    Raises:
        InvalidArgument: Moins de 4 valeurs de δ ou une valeur non positive
    """
    ordered = _check_deltas(deltas)
    window = check_window(window)
    delta0 = ordered[0]

    c1 = check_lower_density(field, window, delta0, grid_n)
    c2 = max(check_upper_density(field, window, 10.0 * ordered[-1], grid_n), c1)
    avg_lo, avg_hi = check_averages(field, window, delta0, grid_n)
    bounded = math.isfinite(field.density_sup(window))
    report = UgsReport(
        c1=c1, c2=c2, avg_ratio_lo=avg_lo, avg_ratio_hi=avg_hi,
        density_bounded=bounded,
        averages_uniform=avg_lo > 0 and avg_hi / avg_lo <= AVERAGE_RATIO_LIMIT,
        grid_n=grid_n, window=window, delta0=delta0,
    )
    if not bounded:
        logger.info("density is unbounded on the window; the ball-average condition is reported only")

    if c1 <= 1e-12 * max(1.0, c2):
        logger.info(f"lower density constant vanishes (c1={c1:.3e}): no uniform global structure")
        return report

    base_points = sample_base_points(window, z0_samples, seed)
    report.sampled_z0 = base_points
    uniform = True
    for delta in ordered:
        brackets = [lambda_bracket(field, z0, delta, budget, seed, c2, strategy, mc_samples) for z0 in base_points]
        lowers = [b.lower for b in brackets]
        top, bottom = max(lowers), min(lowers)
        if bottom < top / UNIFORMITY_FACTOR:
            uniform = False
            logger.info(f"delta={delta}: lower bounds spread from {bottom:.4g} to {top:.4g}, not uniform in z0")
        report.f_table.append(FRow(delta, top, max(b.upper for b in brackets)))
    report.uniform_in_z0 = uniform

    f = np.array([r.lower for r in report.f_table])
    if np.all(f > 0):
        x = np.log(ordered)
        y = np.log(f)
        slope, intercept = np.polyfit(x, y, 1)
        residual = y - (slope * x + intercept)
        report.exponent = float(slope)
        report.fit_residual = float(np.sqrt(np.mean(residual ** 2)))

    report.verdict = classify(report.exponent, uniform)
    logger.info(f"fit_ugs: exponent={report.exponent} verdict={report.verdict}")
    return report
