"""
Hiérarchie d'exceptions de ccball.

Chaque exception porte un code de sortie utilisé par la CLI :
2 pour une erreur de configuration, 3 pour un échec numérique ou géométrique.
"""


class CCBallError(Exception):
    """Classe de base pour toutes les erreurs ccball."""

    exit_code = 3

    @property
    def kind(self) -> str:
        return type(self).__name__


class ConfigurationError(CCBallError):
    """Levée quand une configuration ou un argument utilisateur est invalide."""

    exit_code = 2


class UnknownConfigKey(ConfigurationError):
    """Levée quand une clé inconnue apparaît dans une configuration."""

    def __init__(self, key: str, where: str = "config"):
        self.key = key
        super().__init__(f"unknown key '{key}' in {where}")


class InvalidPotentialSpec(ConfigurationError):
    """Levée quand la spécification d'un potentiel est invalide."""
    pass


class GridFormatError(ConfigurationError):
    """Levée quand un fichier ccgrid est mal formé."""
    pass


class InvalidArgument(ConfigurationError):
    """Levée quand une précondition sur un argument n'est pas respectée."""
    pass


class NumericalError(CCBallError):
    """Classe de base des échecs numériques."""
    pass


class QuadratureBudgetExceeded(NumericalError):
    """Levée quand une quadrature ne converge pas dans le budget configuré."""
    pass


class DegeneratePolygon(CCBallError):
    """Levée pour un polygone auto-intersectant ou d'aire quasi nulle."""
    pass


class UnsupportedOrder(CCBallError):
    """Levée quand un ordre de dérivation dépasse la limite configurée."""
    pass


class InvalidControl(CCBallError):
    """Levée quand un contrôle viole les contraintes de vitesse ou de moyenne nulle."""
    pass


class DegenerateAfterPerturbation(CCBallError):
    """Levée quand la mise en position générale échoue après toutes les tentatives."""
    pass


class NotEulerian(CCBallError):
    """Levée quand le graphe d'une boucle raffinée n'est pas eulérien."""
    pass


class InvalidStockyard(CCBallError):
    """Levée quand un stockyard ne passe pas la validation."""
    pass


class OutOfTableRange(CCBallError):
    """Levée quand une hauteur dépasse Λ à l'échelle maximale supportée."""
    pass


class HessianUnbounded(CCBallError):
    """Levée quand le champ ne peut pas certifier une hessienne bornée."""
    pass


class NormalizationUnavailable(CCBallError):
    """Levée quand la normalisation biholomorphe n'est pas disponible pour ce champ."""
    pass


class OutOfCylinder(CCBallError):
    """Levée quand (a, b, c) sort du cylindre unité."""
    pass
