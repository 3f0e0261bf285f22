from .field import DiscArrayField, spiral_index, spiral_site

__all__ = ['DiscArrayField', 'spiral_index', 'spiral_site']
