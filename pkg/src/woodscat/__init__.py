"""Boundary-integral solver for TE plane-wave scattering by 1-D-periodic
arrays of perfectly conducting cylinders, accurate at all frequencies
including at and around Wood anomalies.

The combined-field integral equation is discretized with a spectrally
accurate Nystrom rule; the quasi-periodic kernel uses shifted Green
functions under a smooth window, and grazing (Wood) orders are handled by
a finite-rank Woodbury/Sherman-Morrison correction.
"""

from .config import ShiftConfig, WaveConfig, make_shift_config
from .exceptions import (ConfigurationError, DegenerateWoodError,
                         NumericalFailureError, SingularMatrixError,
                         SingularPointError, WoodscatError)
from .fields import (FieldSample, boundary_mismatch, downward_series_field,
                     energy_balance_error, incident_field,
                     layer_representation_field, near_field,
                     rayleigh_coefficients, scattered_field)
from .geometry import NystromMesh, build_mesh, make_circle, make_star
from .lalg import LuFactorization, lu_solve, svd_extremes
from .rayleigh import ModeSet, build_modes, functional_I, functional_I_tilde
from .woodsolve import (ScatterSolution, solve, wood_coefficient_quotients,
                        woodbury_apply)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DegenerateWoodError", "FieldSample",
    "LuFactorization", "ModeSet", "NystromMesh", "NumericalFailureError",
    "ScatterSolution", "ShiftConfig", "SingularMatrixError",
    "SingularPointError", "WaveConfig", "WoodscatError", "boundary_mismatch",
    "build_mesh", "build_modes", "downward_series_field",
    "energy_balance_error", "functional_I", "functional_I_tilde",
    "incident_field", "layer_representation_field", "lu_solve", "make_circle",
    "make_shift_config", "make_star", "near_field", "rayleigh_coefficients",
    "scattered_field", "solve", "svd_extremes", "wood_coefficient_quotients",
    "woodbury_apply",
]
