from .field import DensityGridField
from .grid_io import DensityGrid, load_grid, write_grid

__all__ = ['DensityGridField', 'DensityGrid', 'load_grid', 'write_grid']
