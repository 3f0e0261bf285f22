from .context import MetricContext
from .cylinder import cylinder_jacobian, cylinder_point, reach_check, sample_cylinder
from .distance import distance, distance_sqrt, mu, vertical_gap
from .volume import ball_volume, ball_volume_bracket

__all__ = [
    'MetricContext',
    'mu',
    'distance',
    'distance_sqrt',
    'vertical_gap',
    'cylinder_point',
    'cylinder_jacobian',
    'sample_cylinder',
    'reach_check',
    'ball_volume',
    'ball_volume_bracket',
]
