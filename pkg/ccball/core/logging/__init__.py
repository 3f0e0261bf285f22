from .log_manager import LogManager, default_home, setup_logging

__all__ = ['LogManager', 'default_home', 'setup_logging']
