"""Exception hierarchy for the woodscat solver."""


class WoodscatError(Exception):
    """Base class for all woodscat errors."""


class ConfigurationError(WoodscatError):
    """Invalid or inconsistent solver configuration (bad mesh size, shift
    spacing violating the vertical-chord bound, malformed run config)."""


class SingularPointError(WoodscatError):
    """A Green function or kernel was evaluated at (or too close to) one of
    its source poles."""


class SingularMatrixError(WoodscatError):
    """LU factorization hit a numerically zero pivot."""


class DegenerateWoodError(WoodscatError):
    """The r-by-r grazing-mode correction system is singular; the limiting
    solution at this Wood configuration is not computable."""


class NumericalFailureError(WoodscatError):
    """An iterative numerical procedure failed to converge."""
