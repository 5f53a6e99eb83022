"""Cylinder special functions: Bessel J/Y and Hankel H^(1) of orders 0 and 1.

Every Green-function evaluation in this package reduces to H_0^(1) and
H_1^(1) at positive real argument.  Small and moderate arguments are
delegated to scipy's cephes routines (absolute error well below 1e-13 for
x <= 1e4); for the large arguments that dominate lattice sums a vectorized
large-argument expansion evaluates both orders jointly, sharing the common
amplitude and phase factors.
"""

import numpy as np
import scipy.special as _sp

from .exceptions import ConfigurationError

# Switch point between cephes and the large-argument expansion; both
# branches agree to ~1e-15 relative here (see tests).
ASYMPTOTIC_SWITCH = 30.0

_N_ASYMPTOTIC_TERMS = 14


def _asymptotic_coefficients(order, terms):
    # a_m(nu) = prod_{s=1..m} (4 nu^2 - (2s-1)^2) / (8 s)
    a = np.ones(terms + 1)
    for m in range(1, terms + 1):
        a[m] = a[m - 1] * (4.0 * order**2 - (2 * m - 1) ** 2) / (8.0 * m)
    return a

# Module-level tables shared with the numba lattice kernels.
ASYMPTOTIC_A0 = _asymptotic_coefficients(0, _N_ASYMPTOTIC_TERMS)
ASYMPTOTIC_A1 = _asymptotic_coefficients(1, _N_ASYMPTOTIC_TERMS)


def bessel(kind, order, x):
    """Bessel function J_n or Y_n for n in {0, 1} at positive real argument.

    Parameters
    ----------
    kind : {"J", "Y"}
    order : {0, 1}
    x : float or ndarray
        Argument; must be > 0 for kind "Y" (J is accepted at x = 0).

    Returns
    -------
    float or ndarray
    """
    if kind not in ("J", "Y"):
        raise ConfigurationError(f"unknown Bessel kind {kind!r}")
    if order not in (0, 1):
        raise ConfigurationError(f"unsupported order {order}")
    x = np.asarray(x, dtype=float)
    if kind == "Y":
        if np.any(x <= 0.0):
            raise ValueError("Y_n requires x > 0")
        fn = _sp.y0 if order == 0 else _sp.y1
    else:
        if np.any(x < 0.0):
            raise ValueError("J_n requires x >= 0")
        fn = _sp.j0 if order == 0 else _sp.j1
    out = fn(x)
    return out[()] if out.ndim == 0 else out


def hankel1(order, x):
    """Hankel function of the first kind, H_n^(1)(x) = J_n(x) + i Y_n(x).

    Parameters
    ----------
    order : {0, 1}
    x : float or ndarray
        Argument, strictly positive.

    Returns
    -------
    complex or ndarray
    """
    if np.any(np.asarray(x) <= 0.0):
        raise ValueError("H_n^(1) requires x > 0")
    return bessel("J", order, x) + 1j * bessel("Y", order, x)


def hankel1_pair_asymptotic(z, terms=_N_ASYMPTOTIC_TERMS):
    """(H_0^(1)(z), H_1^(1)(z)) via the large-argument expansion.

    Valid to ~1e-14 relative for z >= ASYMPTOTIC_SWITCH.  Both orders share
    the prefactor sqrt(2/(pi z)) * exp(i(z - pi/4)).
    """
    z = np.asarray(z, dtype=float)
    iz = 1j / z
    s0 = np.full(z.shape, ASYMPTOTIC_A0[terms], dtype=complex)
    s1 = np.full(z.shape, ASYMPTOTIC_A1[terms], dtype=complex)
    for m in range(terms - 1, -1, -1):
        s0 = s0 * iz + ASYMPTOTIC_A0[m]
        s1 = s1 * iz + ASYMPTOTIC_A1[m]
    pref = np.sqrt(2.0 / (np.pi * z)) * np.exp(1j * (z - 0.25 * np.pi))
    return pref * s0, pref * (-1j) * s1


def hankel1_pair(z):
    """(H_0^(1)(z), H_1^(1)(z)) for z > 0, dispatching on argument size.

    Large arguments take the joint expansion, the rest go through cephes.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("H_n^(1) requires z > 0")
    if z.ndim == 0:
        z = z[None]
        scalar = True
    else:
        scalar = False
    h0 = np.empty(z.shape, dtype=complex)
    h1 = np.empty(z.shape, dtype=complex)
    far = z >= ASYMPTOTIC_SWITCH
    if far.any():
        h0[far], h1[far] = hankel1_pair_asymptotic(z[far])
    near = ~far
    if near.any():
        zn = z[near]
        h0[near] = _sp.j0(zn) + 1j * _sp.y0(zn)
        h1[near] = _sp.j1(zn) + 1j * _sp.y1(zn)
    if scalar:
        return h0[0], h1[0]
    return h0, h1
