from .config import DEFAULT_NUMERICS, NumericSettings, RunConfig, load_run_config, parse_run_config
from .exceptions import CCBallError, ConfigurationError, NumericalError

__all__ = [
    'DEFAULT_NUMERICS',
    'NumericSettings',
    'RunConfig',
    'load_run_config',
    'parse_run_config',
    'CCBallError',
    'ConfigurationError',
    'NumericalError',
]
