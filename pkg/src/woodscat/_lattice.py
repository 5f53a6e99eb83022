"""Vectorized accumulation of windowed image-lattice kernel sums.

For targets p_m and mesh sources r_q this module accumulates the
double-layer and single-layer kernel values of the windowed shifted
quasi-periodic Green function,

    D[m,q] = sum_{n,l} e^{-i alpha n L} c_l [ W * (ik/4) H1(kd) g/d
                                              - (W'/A) (i/4) H0(kd) n1_q ]
    S[m,q] = sum_{n,l} e^{-i alpha n L} c_l   W * (i/4) H0(kd) J_q

with U = X + nL, V = Y + l*h, d = |(U,V)|, g = U n1_q + V n2_q, window
W = W(U/A) and c_l the j-th order finite-difference coefficients.  The
(n=0, l=0) term is optionally excluded (on-boundary assembly treats it
separately through the logarithmic quadrature split).

Lattice offsets close enough that k*d could drop below the asymptotic
switch go through scipy (exact cephes); the far offsets go through a fused
numba kernel evaluating both Hankel orders from the shared large-argument
expansion.  A pure-numpy far path with identical semantics serves as the
reference implementation and fallback.
"""

import math

import numpy as np

from .exceptions import SingularPointError
from .specfun import (ASYMPTOTIC_A0, ASYMPTOTIC_A1, ASYMPTOTIC_SWITCH,
                      hankel1_pair)

try:
    import numba as _nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

POLE_GUARD_REL = 1e-8  # minimum kernel distance, relative to the period

_MAX_CHUNK_ELEMENTS = 4_000_000


def binomial_coefficients(j):
    """Finite-difference coefficients (-1)^l C(j, l), l = 0..j."""
    return np.array([(-1.0) ** l * math.comb(j, l) for l in range(j + 1)])


def _window_arrays(t, c):
    t_ = np.abs(t)
    w = np.zeros(t_.shape)
    w[t_ <= c] = 1.0
    bridge = (t_ > c) & (t_ < 1.0)
    u = (t_[bridge] - c) / (1.0 - c)
    eu = np.exp(-1.0 / u)
    w[bridge] = np.exp(2.0 * eu / (u - 1.0))
    wp = np.zeros(t_.shape)
    wp[bridge] = w[bridge] * 2.0 * eu * ((u - 1.0) / u**2 - 1.0) / (u - 1.0) ** 2 / (1.0 - c)
    return w, wp * np.sign(t)


def _accumulate_numpy(out_d, out_s, dx, dy, n1, n2, jac, n_values, cfg, shift,
                      skip_self, guard):
    """Reference accumulation over the given lattice offsets (all l shifts)."""
    k, L, alpha = cfg.k, cfg.L, cfg.alpha
    A, c, h = shift.window_halfwidth, shift.window_flat, shift.spacing
    coefs = binomial_coefficients(shift.n_shifts)
    guard_dist = POLE_GUARD_REL * L
    for n in n_values:
        U = dx + n * L
        w, wp = _window_arrays(U / A, c)
        wp = wp / A
        if not w.any() and not wp.any():
            continue
        phase = np.exp(-1j * alpha * n * L)
        for l, cl in enumerate(coefs):
            if skip_self and n == 0 and l == 0:
                continue
            V = dy + l * h
            d = np.hypot(U, V)
            if guard and d.min() < guard_dist:
                raise SingularPointError(
                    f"kernel distance {d.min():.3e} below guard at lattice offset (n={n}, l={l})")
            h0, h1 = hankel1_pair(k * d)
            g = U * n1 + V * n2
            pc = phase * cl
            out_d += pc * (w * (0.25j * k) * h1 * g / d - wp * 0.25j * h0 * n1)
            out_s += pc * w * 0.25j * h0 * jac
    return out_d, out_s


if HAVE_NUMBA:

    @_nb.njit(parallel=True, fastmath=True, cache=True)
    def _accumulate_far_numba(out_d, out_s, tx, ty, sx, sy, n1, n2, jac,
                              n_values, phases, coefs, k, L, A, c, h, a0, a1):
        n_t = tx.shape[0]
        n_s = sx.shape[0]
        n_lat = n_values.shape[0]
        n_coef = coefs.shape[0]
        terms = a0.shape[0] - 1
        quarter_pi = 0.25 * np.pi
        inv_one_minus_c = 1.0 / (1.0 - c)
        for m in _nb.prange(n_t):
            for q in range(n_s):
                dx = tx[m] - sx[q]
                dy = ty[m] - sy[q]
                acc_d = 0.0 + 0.0j
                acc_s = 0.0 + 0.0j
                for p in range(n_lat):
                    U = dx + n_values[p] * L
                    t_w = abs(U) / A
                    if t_w >= 1.0:
                        continue
                    if t_w <= c:
                        w = 1.0
                        wp = 0.0
                    else:
                        u = (t_w - c) * inv_one_minus_c
                        eu = np.exp(-1.0 / u)
                        w = np.exp(2.0 * eu / (u - 1.0))
                        wp = w * 2.0 * eu * ((u - 1.0) / (u * u) - 1.0) \
                            / ((u - 1.0) * (u - 1.0)) * inv_one_minus_c
                        if U < 0.0:
                            wp = -wp
                    wp = wp / A
                    ph = phases[p]
                    for l in range(n_coef):
                        V = dy + l * h
                        d = np.sqrt(U * U + V * V)
                        z = k * d
                        # joint large-argument Hankel expansion (z >= switch
                        # guaranteed by the caller's lattice split)
                        iz = 1.0 / z
                        s0r = a0[terms]
                        s0i = 0.0
                        s1r = a1[terms]
                        s1i = 0.0
                        for mm in range(terms - 1, -1, -1):
                            t0r = -s0i * iz + a0[mm]
                            s0i = s0r * iz
                            s0r = t0r
                            t1r = -s1i * iz + a1[mm]
                            s1i = s1r * iz
                            s1r = t1r
                        pref = np.sqrt(2.0 / (np.pi * z))
                        ang = z - quarter_pi
                        er = np.cos(ang)
                        ei = np.sin(ang)
                        h0 = pref * complex(er * s0r - ei * s0i, er * s0i + ei * s0r)
                        e1 = pref * complex(er * s1r - ei * s1i, er * s1i + ei * s1r)
                        h1 = complex(e1.imag, -e1.real)  # multiply by -i
                        g = U * n1[q] + V * n2[q]
                        pc = ph * coefs[l]
                        acc_d += pc * (w * (0.25j * k) * h1 * g / d
                                       - wp * 0.25j * h0 * n1[q])
                        acc_s += pc * w * 0.25j * h0 * jac[q]
                out_d[m, q] += acc_d
                out_s[m, q] += acc_s


def _far_numpy(out_d, out_s, dx, dy, n1, n2, jac, far_values, cfg, shift):
    if far_values.size == 0:
        return
    pairs = dx.size
    chunk = max(1, _MAX_CHUNK_ELEMENTS // max(pairs, 1))
    for start in range(0, far_values.size, chunk):
        block = far_values[start:start + chunk]
        _accumulate_numpy(out_d, out_s, dx, dy, n1, n2, jac, block, cfg, shift,
                          skip_self=False, guard=False)


def smooth_layer_sums(targets, mesh, cfg, shift, *, skip_self, guard=True,
                      use_numba=None):
    """Kernel-value matrices (D, S) of the windowed lattice sums.

    targets : (m, 2) evaluation points
    skip_self : exclude the (n=0, l=0) free-space term (on-boundary assembly)
    guard : raise SingularPointError when a kernel distance falls below
        POLE_GUARD_REL * L on the near offsets

    Quadrature weights are not applied here.
    """
    if use_numba is None:
        use_numba = HAVE_NUMBA
    targets = np.asarray(targets, dtype=float)
    tx, ty = targets[:, 0], targets[:, 1]
    sx, sy = mesh.points[:, 0], mesh.points[:, 1]
    nraw = mesh.normals_raw
    n1, n2, jac = nraw[:, 0], nraw[:, 1], mesh.jacobian

    dx = tx[:, None] - sx[None, :]
    dy = ty[:, None] - sy[None, :]

    A, L, k = shift.window_halfwidth, cfg.L, cfg.k
    n_lo = int(np.ceil((-A - dx.min()) / L))
    n_hi = int(np.floor((A - dx.max()) / L))
    if n_lo > n_hi:
        lattice = np.zeros(0, dtype=np.int64)
    else:
        lattice = np.arange(n_lo, n_hi + 1, dtype=np.int64)

    # offsets whose minimum distance could fall below the asymptotic switch
    dx_abs_max = max(abs(dx.min()), abs(dx.max()))
    near_cut = (ASYMPTOTIC_SWITCH / k + dx_abs_max) / L
    near_mask = np.abs(lattice) <= near_cut
    near_values = lattice[near_mask]
    far_values = lattice[~near_mask]

    shape = (targets.shape[0], mesh.n)
    out_d = np.zeros(shape, dtype=complex)
    out_s = np.zeros(shape, dtype=complex)

    _accumulate_numpy(out_d, out_s, dx, dy, n1, n2, jac, near_values, cfg, shift,
                      skip_self=skip_self, guard=guard)

    if far_values.size:
        if use_numba and HAVE_NUMBA:
            phases = np.exp(-1j * cfg.alpha * far_values * L)
            _accumulate_far_numba(out_d, out_s, tx, ty, sx, sy, n1, n2, jac,
                                  far_values, phases,
                                  binomial_coefficients(shift.n_shifts),
                                  k, L, A, shift.window_flat, shift.spacing,
                                  ASYMPTOTIC_A0, ASYMPTOTIC_A1)
        else:
            _far_numpy(out_d, out_s, dx, dy, n1, n2, jac, far_values, cfg, shift)

    return out_d, out_s
