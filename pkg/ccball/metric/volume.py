"""Volume des boules CC : |B_d(p0, δ)| ≈ δ² Λ(p0, δ)."""

import math
from typing import Optional, Tuple

from ..core.exceptions import InvalidArgument
from ..stockyard.bounds import lambda_bracket
from .context import MetricContext


def _check_delta(delta: float):
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidArgument(f"delta must be positive and finite, got {delta}")


def ball_volume(ctx: MetricContext, z0: complex, delta: float) -> float:
    """δ² × borne inférieure de Λ(z0, δ)."""
    _check_delta(delta)
    return delta * delta * ctx.lambda_lower(complex(z0), delta)


def ball_volume_bracket(ctx: MetricContext, z0: complex, delta: float,
                        c2: Optional[float] = None) -> Tuple[float, float]:
    """(δ² Λ_lower, δ² Λ_upper) ; c2 estimé localement si None."""
    _check_delta(delta)
    bracket = lambda_bracket(ctx.field, complex(z0), delta, ctx.budget, ctx.seed, c2,
                             ctx.strategy, ctx.mc_samples)
    lower = max(bracket.lower, ctx.lambda_lower(complex(z0), delta))
    return delta * delta * lower, delta * delta * max(bracket.upper, lower)
