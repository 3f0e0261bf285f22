from .bounds import (
    LambdaBracket,
    estimate_c2,
    lambda_bracket,
    lambda_estimate,
    lambda_lower,
    lambda_profile,
    upper_bound,
)
from .optimizer import STRATEGIES, optimize
from .pens import Pen, PenEntry, Stockyard, StockyardCheck, validate, value

__all__ = [
    'Pen',
    'PenEntry',
    'Stockyard',
    'StockyardCheck',
    'validate',
    'value',
    'optimize',
    'STRATEGIES',
    'upper_bound',
    'estimate_c2',
    'LambdaBracket',
    'lambda_bracket',
    'lambda_estimate',
    'lambda_lower',
    'lambda_profile',
]
