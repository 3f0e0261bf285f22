from .field import QuadraticField

__all__ = ['QuadraticField']
