from .decomposition import cycle_upper_witness, decompose, loop_integral, signed_mass
from .loops import PolyLoop, SimpleCycle
from .refine import refine_intersections
from ..core.geometry import is_simple_polygon

__all__ = [
    'PolyLoop',
    'SimpleCycle',
    'refine_intersections',
    'decompose',
    'signed_mass',
    'loop_integral',
    'cycle_upper_witness',
    'is_simple_polygon',
]
