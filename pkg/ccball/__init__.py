"""
ccball - métriques de Carnot-Carathéodory sur les hypersurfaces modèles
Im z₂ = P(z₁) : structure globale Λ, stockyards, décomposition en cycles,
structures globales uniformes et estimations de distance et de volume.
"""

import logging

__version__ = "0.1.0"

# Les handlers sont installés par ccball.core.logging.setup_logging
logging.getLogger("ccball").addHandler(logging.NullHandler())
