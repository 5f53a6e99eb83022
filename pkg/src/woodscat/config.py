"""Wave and shift/window configuration records.

The incidence is stored through the Bloch wavenumber alpha = k sin(theta)
rather than the angle itself: grazing-order studies need alpha_n = alpha +
2*pi*n/L to hit +-k exactly in floating point, which the angle-first route
(alpha = k * sin(asin(...))) cannot guarantee.
"""

import math
from dataclasses import dataclass, replace

from .exceptions import ConfigurationError


@dataclass(frozen=True)
class WaveConfig:
    """Plane-wave illumination of a grating of period L.

    k : wavenumber (> 0)
    L : period (> 0)
    alpha : Bloch wavenumber k*sin(theta), |alpha| < k
    """

    k: float
    L: float
    alpha: float

    def __post_init__(self):
        if self.k <= 0.0:
            raise ConfigurationError("wavenumber k must be positive")
        if self.L <= 0.0:
            raise ConfigurationError("period L must be positive")
        if abs(self.alpha) >= self.k:
            raise ConfigurationError("|alpha| must be < k (incidence |theta| < pi/2)")

    @classmethod
    def from_theta(cls, k, theta, L):
        """From incidence angle theta (radians, measured from the y-axis)."""
        if abs(theta) >= 0.5 * math.pi:
            raise ConfigurationError("|theta| must be < pi/2")
        return cls(k=float(k), L=float(L), alpha=float(k) * math.sin(theta))

    @classmethod
    def littrow(cls, k, L):
        """Littrow mount of order -1: k L sin(theta) = pi, i.e. alpha = pi/L."""
        if float(k) * float(L) < math.pi:
            raise ConfigurationError("Littrow mount requires k*L >= pi")
        return cls(k=float(k), L=float(L), alpha=math.pi / float(L))

    @property
    def beta(self):
        """Vertical wavenumber k*cos(theta) of the incident wave."""
        return math.sqrt(self.k**2 - self.alpha**2)

    @property
    def theta(self):
        return math.asin(self.alpha / self.k)

    def with_k(self, k):
        """Same mount (fixed alpha, L) at a different wavenumber."""
        return replace(self, k=float(k))


@dataclass(frozen=True)
class ShiftConfig:
    """Shifted/windowed Green-function parameters.

    n_shifts : number j of auxiliary poles placed below the true pole
    spacing : vertical pole spacing h; must exceed the scatterer's vertical
        extent (strict inequality) for the Rayleigh-tail rewrite to hold
    window_halfwidth : window half-size A (A = N_per * L in run configs)
    window_flat : flat-region fraction c of the cutoff, 0 < c < 1
    gamma : single-layer coupling (>= 0)
    n_evanescent : evanescent modes kept on each side of the propagating set
    wood_threshold : relative |beta_n|/k below which a mode is treated as
        grazing and routed through the finite-rank correction
    """

    n_shifts: int
    spacing: float
    window_halfwidth: float
    gamma: float
    window_flat: float = 0.5
    n_evanescent: int = 20
    wood_threshold: float = 1e-2

    def __post_init__(self):
        if self.n_shifts < 0:
            raise ConfigurationError("shift count must be >= 0")
        if self.spacing <= 0.0:
            raise ConfigurationError("shift spacing h must be positive")
        if self.window_halfwidth <= 0.0:
            raise ConfigurationError("window half-width A must be positive")
        if not (0.0 < self.window_flat < 1.0):
            raise ConfigurationError("window flat fraction c must lie in (0, 1)")
        if self.gamma < 0.0:
            raise ConfigurationError("coupling gamma must be >= 0")
        if self.n_evanescent < 0:
            raise ConfigurationError("evanescent truncation count must be >= 0")
        if self.wood_threshold < 0.0:
            raise ConfigurationError("Wood threshold must be >= 0")


SPACING_OVER_EXTENT = 1.5


def make_shift_config(cfg, mesh, n_shifts, n_periods, spacing=None, gamma=None,
                      window_flat=0.5, n_evanescent=20, wood_threshold=1e-2):
    """Resolve a concrete ShiftConfig for a given wave/mesh.

    spacing defaults to 1.5x the scatterer's vertical extent, gamma to the
    wavenumber k; the window half-width is n_periods * L.
    """
    if spacing is None:
        spacing = SPACING_OVER_EXTENT * mesh.extent
    if gamma is None:
        gamma = cfg.k
    return ShiftConfig(n_shifts=int(n_shifts), spacing=float(spacing),
                       window_halfwidth=float(n_periods) * cfg.L, gamma=float(gamma),
                       window_flat=float(window_flat), n_evanescent=int(n_evanescent),
                       wood_threshold=float(wood_threshold))
