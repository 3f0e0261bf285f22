"""
Distance CC à grande échelle : inverse généralisée μ de δ ↦ Λ(z0, δ) et
formule d(p0, p1) ≈ |z1 − z0| + μ(z0, |t1 − t0 − T(p0, p1)|).
"""

import logging
import math

from ..controls.control_pair import BoundaryPoint
from ..core.exceptions import HessianUnbounded, InvalidArgument, NormalizationUnavailable, OutOfTableRange
from .context import MetricContext

logger = logging.getLogger("ccball.metric")

MU_REL_TOL = 1e-9
MU_FLOOR = 1e-12


def mu(ctx: MetricContext, z0: complex, h: float) -> float:
    """
    μ(z0, h) = inf{δ : Λ_lower(z0, δ) ≥ h}.

    Encadrement par doublement à partir de δ0 (plafonné à ctx.delta_cap)
    puis bissection jusqu'à une largeur relative 10⁻⁹ ; rend la borne haute.

    Raises:
        InvalidArgument: Si h < 0 ou n'est pas fini
        OutOfTableRange: Si Λ_lower(z0, delta_cap) < h
    """
    if not (h >= 0 and math.isfinite(h)):
        raise InvalidArgument(f"height must be finite and nonnegative, got {h}")
    if h == 0:
        return 0.0

    lo, hi = 0.0, min(ctx.delta0, ctx.delta_cap)
    while ctx.lambda_lower(z0, hi) < h:
        if hi >= ctx.delta_cap:
            raise OutOfTableRange(
                f"height {h:.6g} exceeds the Lambda lower bound {ctx.lambda_lower(z0, hi):.6g} "
                f"at the largest supported delta {ctx.delta_cap:g}"
            )
        lo, hi = hi, min(2.0 * hi, ctx.delta_cap)

    while hi - lo > MU_REL_TOL * hi and hi > MU_FLOOR * ctx.delta0:
        mid = 0.5 * (lo + hi)
        if ctx.lambda_lower(z0, mid) >= h:
            hi = mid
        else:
            lo = mid
    return hi


def vertical_gap(ctx: MetricContext, p0: BoundaryPoint, p1: BoundaryPoint, regime: str = "large") -> float:
    """|t1 − t0 − T(p0, p1)| dans le régime demandé."""
    shear = ctx.field.t_offset(p0.z, p1.z, regime, ctx.m)
    return abs(p1.t - p0.t - shear)


def distance(ctx: MetricContext, p0: BoundaryPoint, p1: BoundaryPoint) -> float:
    """
    Estimation de d(p0, p1).

    La branche grande échelle de T est évaluée d'abord ; si le résultat est
    ≤ δ0 on réévalue avec la somme de Taylor d'ordre m. Quand les deux
    branches tombent de part et d'autre de δ0, la grande échelle l'emporte.
    """
    dz = abs(p1.z - p0.z)
    large = dz + mu(ctx, p0.z, vertical_gap(ctx, p0, p1, "large"))
    if large > ctx.delta0:
        return large

    small = dz + mu(ctx, p0.z, vertical_gap(ctx, p0, p1, "small"))
    if small > ctx.delta0:
        logger.debug(f"regime branches disagree around delta0={ctx.delta0}: "
                     f"large={large:.6g} small={small:.6g}; keeping the large branch")
        return large
    return small


def distance_sqrt(ctx: MetricContext, p0: BoundaryPoint, p1: BoundaryPoint) -> float:
    """
    |Δz| + √|Δt| après normalisation biholomorphe P(p0) = 0, ∇P(p0) = 0.

    Pour le champ quadratique la normalisation est une complétion du carré :
    elle revient à remplacer Δt par t1 − t0 − T(p0, p1).

    Raises:
        HessianUnbounded: Si le champ ne certifie pas ‖∇²P‖∞ < ∞
        NormalizationUnavailable: Si la normalisation exacte n'est pas connue pour ce champ
    """
    field = ctx.field
    if not field.has_bounded_hessian:
        raise HessianUnbounded(f"field '{field.kind}' cannot certify a bounded Hessian")
    if field.kind != "quadratic":
        raise NormalizationUnavailable(f"no exact normalization is available for field '{field.kind}'")
    return abs(p1.z - p0.z) + math.sqrt(vertical_gap(ctx, p0, p1, "large"))
