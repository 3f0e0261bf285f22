from .density import check_averages, check_lower_density, check_upper_density, type_m
from .report import VERDICTS, FRow, UgsReport, classify, fit_ugs, sample_base_points

__all__ = [
    'check_lower_density',
    'check_upper_density',
    'check_averages',
    'type_m',
    'fit_ugs',
    'classify',
    'sample_base_points',
    'UgsReport',
    'FRow',
    'VERDICTS',
]
