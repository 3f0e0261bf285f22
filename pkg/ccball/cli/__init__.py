"""
Module CLI pour ccball.
Contient les sous-commandes, les émetteurs CSV/JSON et le healthcheck.
"""

import sys
from typing import List, Optional


def main(argv: Optional[List[str]] = None):
    from ..main import main as run

    sys.exit(run(argv))


__all__ = ['main']
