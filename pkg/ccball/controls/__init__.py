from .control_pair import BoundaryPoint, ControlPair, project_mean_zero
from .flow import circle_control, integrate_flow, path_length, planar_path, twist
from .sampling import mc_lower_bound, random_control

__all__ = [
    'BoundaryPoint',
    'ControlPair',
    'project_mean_zero',
    'circle_control',
    'integrate_flow',
    'path_length',
    'planar_path',
    'twist',
    'mc_lower_bound',
    'random_control',
]
