"""Exception hierarchy for geoflow."""


class GeoflowError(Exception):
    """Base class for all geoflow errors."""


class GridMismatchError(GeoflowError):
    """Two fields live on different grids."""


class DegenerateDiffeoError(GeoflowError):
    """A map fails the orientation-preserving condition min(1 + f_x) > 0."""


class InversionError(GeoflowError):
    """Newton inversion of a circle diffeomorphism did not converge."""


class BlowupError(GeoflowError):
    """Geodesic integration left the valid region (finite existence time).

    Attributes
    ----------
    time : float
        Simulation time at which blow-up was detected.
    """

    def __init__(self, message, time):
        super().__init__(message)
        self.time = float(time)


class PastBlowupError(GeoflowError):
    """A characteristics solve was requested at or past the gradient catastrophe."""


class LogConvergenceError(GeoflowError):
    """Newton shooting for the Riemannian logarithm did not converge."""


class PathResolutionError(GeoflowError):
    """A discrete path fails its velocity/position consistency check."""


class ConfigError(GeoflowError):
    """An experiment configuration failed validation."""
