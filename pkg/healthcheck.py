#!/usr/bin/env python3
"""
Point d'entrée pour le healthcheck de ccball.

Usage:
    python healthcheck.py                          # Toutes les vérifications
    python healthcheck.py --json                   # Sortie JSON
    python healthcheck.py --check quadratic_lambda # Vérification spécifique
"""

import sys
import os

# Ajouter le répertoire du projet au path Python
project_dir = os.path.dirname(os.path.abspath(__file__))
if project_dir not in sys.path:
    sys.path.insert(0, project_dir)

try:
    from ccball.cli.healthcheck import main

    if __name__ == "__main__":
        sys.exit(main())

except ImportError as e:
    print(f"Erreur d'importation: {e}")
    print("Assurez-vous que ccball et ses dépendances sont installés.")
    sys.exit(1)
