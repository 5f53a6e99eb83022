import numpy as np
import pytest

from woodscat import WaveConfig, build_mesh, make_circle, make_shift_config

L_DEFAULT = 2.0 * np.pi

# (radius/L, k in units of 2pi/L) -> (j, n_i, N_per, N_ev), the published
# parameter choices used for the table-reproduction runs
TABLE_PARAMS = {
    (0.05, 1.0): (1, 16, 30, 18),
    (0.10, 1.0): (1, 16, 38, 20),
    (0.25, 1.0): (1, 14, 66, 10),
    (0.05, 1.5): (5, 18, 50, 20),
    (0.10, 1.5): (5, 18, 200, 20),
    (0.25, 1.5): (5, 20, 1000, 20),
    (0.05, 1.49): (5, 18, 100, 20),
    (0.10, 1.49): (5, 18, 175, 20),
    (0.25, 1.49): (5, 20, 400, 20),
}


def littrow_setup(radius_frac, k_factor, j, n_i, n_per, n_ev, L=L_DEFAULT, **kw):
    """Mesh/wave/shift triple for a Littrow-mounted circle configuration."""
    k = k_factor * 2.0 * np.pi / L
    cfg = WaveConfig.littrow(k, L)
    mesh = build_mesh(make_circle(radius_frac * L), n_i)
    shift = make_shift_config(cfg, mesh, n_shifts=j, n_periods=n_per,
                              n_evanescent=n_ev, **kw)
    return mesh, cfg, shift


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
