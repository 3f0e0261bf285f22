import os
import logging
import logging.handlers
from datetime import datetime
from pathlib import Path
from typing import List, Optional


def default_home() -> Path:
    """Répertoire de travail de ccball (CCBALL_HOME ou ~/.ccball)."""
    env_home = os.environ.get("CCBALL_HOME")
    if env_home:
        return Path(env_home)
    return Path.home() / ".ccball"


class LogManager:
    """Gestionnaire centralisé des logs pour ccball."""

    def __init__(self, log_dir: Optional[str] = None, verbose: bool = False):
        """Initialise le gestionnaire de logs.

        Args:
            log_dir: Répertoire pour stocker les logs. Par défaut <home>/logs
            verbose: Affiche les messages INFO sur le flux de diagnostic
        """
        if log_dir is None:
            self.log_dir = default_home() / "logs"
        else:
            self.log_dir = Path(log_dir)

        self.log_dir.mkdir(parents=True, exist_ok=True)

        stamp = datetime.now().strftime('%Y%m%d')
        self.log_file = self.log_dir / f"ccball_{stamp}.log"
        self.error_file = self.log_dir / f"ccball_errors_{stamp}.log"
        self.verbose = verbose
        self.setup_logging()

    def setup_logging(self) -> logging.Logger:
        """Configure le logger 'ccball' et ses handlers."""
        log_format = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'
        date_format = '%Y-%m-%d %H:%M:%S'
        formatter = logging.Formatter(log_format, date_format)

        logger = logging.getLogger('ccball')
        logger.setLevel(logging.DEBUG)

        # Supprimer les handlers existants pour éviter les doublons
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)
            handler.close()

        file_handler = logging.handlers.RotatingFileHandler(
            self.log_file,
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            self.error_file,
            maxBytes=5 * 1024 * 1024,
            backupCount=3,
            encoding='utf-8'
        )
        error_handler.setLevel(logging.WARNING)
        error_handler.setFormatter(formatter)
        logger.addHandler(error_handler)

        # La console reste sur stderr : stdout est réservé aux données
        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.INFO if self.verbose else logging.WARNING)
        console_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s',
            '%H:%M:%S'
        ))
        logger.addHandler(console_handler)

        logger.propagate = False
        return logger

    def get_log_files(self) -> List[Path]:
        """Retourne la liste des fichiers de logs, plus récents d'abord."""
        log_files = [p for p in self.log_dir.glob("ccball_*.log*") if p.is_file()]
        return sorted(log_files, key=lambda x: x.stat().st_mtime, reverse=True)


def setup_logging(log_dir: Optional[str] = None, verbose: bool = False) -> LogManager:
    """Point d'entrée unique pour configurer le logging de ccball."""
    return LogManager(log_dir=log_dir, verbose=verbose)
