"""Free-space, shifted, windowed quasi-periodic and spectral Green functions.

All functions take the kernel argument (X, Y) = r - r' directly.  The
shifted function places j auxiliary poles at (0, -l*h), l = 1..j, i.e.
vertically beneath the true pole, with j-th order finite-difference
coefficients; the windowed lattice sum smoothly truncates the image row at
half-width A.  These point evaluators are the reference implementations;
matrix assembly uses the vectorized accumulators in ``_lattice``.
"""

import math

import numpy as np

from .exceptions import ConfigurationError, SingularPointError
from .specfun import hankel1_pair

POLE_TOLERANCE = 1e-13


def _as_arrays(X, Y):
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    scalar = X.ndim == 0 and Y.ndim == 0
    return np.atleast_1d(X), np.atleast_1d(Y), scalar


def window(t, c=0.5):
    """C-infinity cutoff: 1 on |t| <= c, 0 on |t| >= 1, smooth bridge between.

    Bridge: exp(2 e^{-1/u} / (u - 1)) with u = (|t| - c)/(1 - c), which is 1
    at u = 0 and 0 at u = 1 with all derivatives vanishing at both ends.
    """
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    t_ = np.abs(np.atleast_1d(ts))
    out = np.zeros(t_.shape)
    out[t_ <= c] = 1.0
    bridge = (t_ > c) & (t_ < 1.0)
    u = (t_[bridge] - c) / (1.0 - c)
    out[bridge] = np.exp(2.0 * np.exp(-1.0 / u) / (u - 1.0))
    return float(out[0]) if scalar else out


def window_derivative(t, c=0.5):
    """dW/dt of the cutoff above (zero outside the bridge region)."""
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ta = np.atleast_1d(ts)
    t_ = np.abs(ta)
    out = np.zeros(t_.shape)
    bridge = (t_ > c) & (t_ < 1.0)
    u = (t_[bridge] - c) / (1.0 - c)
    w = np.exp(2.0 * np.exp(-1.0 / u) / (u - 1.0))
    dexp = 2.0 * np.exp(-1.0 / u) * ((u - 1.0) / u**2 - 1.0) / (u - 1.0) ** 2
    out[bridge] = w * dexp / (1.0 - c)
    out = out * np.sign(ta)
    return float(out[0]) if scalar else out


def _check_distance(k, d, what):
    if np.any(d * k <= POLE_TOLERANCE):
        raise SingularPointError(f"{what} evaluated at a source pole")


def free_green(k, X, Y):
    """Free-space Helmholtz Green function (i/4) H_0^(1)(k |r|)."""
    X, Y, scalar = _as_arrays(X, Y)
    d = np.hypot(X, Y)
    _check_distance(k, d, "free-space Green function")
    h0, _ = hankel1_pair(k * d)
    out = 0.25j * h0
    return complex(out[0]) if scalar else out


def free_green_gradient(k, X, Y):
    """Gradient of the free-space Green function w.r.t. (X, Y)."""
    X, Y, scalar = _as_arrays(X, Y)
    d = np.hypot(X, Y)
    _check_distance(k, d, "free-space Green function gradient")
    _, h1 = hankel1_pair(k * d)
    factor = -0.25j * k * h1 / d
    gx, gy = factor * X, factor * Y
    return (complex(gx[0]), complex(gy[0])) if scalar else (gx, gy)


def _binomial_coefficients(j):
    return np.array([(-1.0) ** l * math.comb(j, l) for l in range(j + 1)])


def shifted_green(shift, k, X, Y):
    """Finite-difference combination sum_l (-1)^l C(j,l) G_0(k; X, Y + l h)."""
    X, Y, scalar = _as_arrays(X, Y)
    coef = _binomial_coefficients(shift.n_shifts)
    out = np.zeros(np.broadcast(X, Y).shape, dtype=complex)
    for l, cl in enumerate(coef):
        out = out + cl * free_green(k, X, Y + l * shift.spacing)
    return complex(out.reshape(-1)[0]) if scalar else out


def shifted_green_gradient(shift, k, X, Y):
    """Gradient of the shifted Green function w.r.t. (X, Y)."""
    X, Y, scalar = _as_arrays(X, Y)
    coef = _binomial_coefficients(shift.n_shifts)
    shape = np.broadcast(X, Y).shape
    gx = np.zeros(shape, dtype=complex)
    gy = np.zeros(shape, dtype=complex)
    for l, cl in enumerate(coef):
        gxl, gyl = free_green_gradient(k, X, Y + l * shift.spacing)
        gx, gy = gx + cl * gxl, gy + cl * gyl
    if scalar:
        return complex(gx.reshape(-1)[0]), complex(gy.reshape(-1)[0])
    return gx, gy


def _lattice_range(X, L, A):
    n_lo = int(np.ceil((-A - np.min(X)) / L))
    n_hi = int(np.floor((A - np.max(X)) / L))
    return np.arange(n_lo, n_hi + 1)


def windowed_qp_green(shift, cfg, X, Y):
    """Windowed quasi-periodic shifted Green function G^A at (X, Y).

    Sums e^{-i alpha n L} G_j(X + nL, Y) W((X + nL)/A) over the lattice
    offsets inside the window support.
    """
    X, Y, scalar = _as_arrays(X, Y)
    A, c = shift.window_halfwidth, shift.window_flat
    out = np.zeros(np.broadcast(X, Y).shape, dtype=complex)
    for n in _lattice_range(X, cfg.L, A):
        Xn = X + n * cfg.L
        w = window(Xn / A, c)
        phase = np.exp(-1j * cfg.alpha * n * cfg.L)
        out = out + phase * w * shifted_green(shift, cfg.k, Xn, Y)
    return complex(out.reshape(-1)[0]) if scalar else out


def windowed_qp_green_gradient(shift, cfg, X, Y):
    """Exact gradient of G^A, including the window-derivative term."""
    X, Y, scalar = _as_arrays(X, Y)
    A, c = shift.window_halfwidth, shift.window_flat
    shape = np.broadcast(X, Y).shape
    gx = np.zeros(shape, dtype=complex)
    gy = np.zeros(shape, dtype=complex)
    for n in _lattice_range(X, cfg.L, A):
        Xn = X + n * cfg.L
        w = window(Xn / A, c)
        wp = window_derivative(Xn / A, c) / A
        phase = np.exp(-1j * cfg.alpha * n * cfg.L)
        g = shifted_green(shift, cfg.k, Xn, Y)
        gxl, gyl = shifted_green_gradient(shift, cfg.k, Xn, Y)
        gx = gx + phase * (w * gxl + wp * g)
        gy = gy + phase * w * gyl
    if scalar:
        return complex(gx.reshape(-1)[0]), complex(gy.reshape(-1)[0])
    return gx, gy


def spectral_qp_green(cfg, X, Y, n_max):
    """Classical quasi-periodic Green function via its Rayleigh series.

    (i/2L) sum_{|n| <= n_max} e^{i alpha_n X + i beta_n |Y|} / beta_n.
    Only meaningful away from grazing orders (all |beta_n| bounded away from
    zero) and off the array line Y != 0; used as a validation reference.
    """
    X, Y, scalar = _as_arrays(X, Y)
    if np.any(Y == 0.0):
        raise ConfigurationError("spectral series requires Y != 0")
    n = np.arange(-n_max, n_max + 1)
    alpha_n = cfg.alpha + 2.0 * np.pi * n / cfg.L
    beta_n = np.sqrt((cfg.k**2 - alpha_n**2).astype(complex))
    if np.any(np.abs(beta_n) <= 1e-8 * cfg.k):
        raise ConfigurationError("spectral series undefined at a Wood configuration")
    Xb, Yb = np.broadcast_arrays(X, Y)
    phases = np.exp(1j * (alpha_n * Xb[..., None] + beta_n * np.abs(Yb)[..., None]))
    out = (0.5j / cfg.L) * np.sum(phases / beta_n, axis=-1)
    return complex(out.reshape(-1)[0]) if scalar else out
