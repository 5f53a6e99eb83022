"""Nystrom discretization of the combined-field operator.

The boundary operator applied to a density psi is

    (1/2) psi + integral over dD0 of (dG^A/dnu' - i gamma G^A) psi dS
    - (i/2L) sum over tail orders of sigma_n I+_n[psi] / beta_n
             * exp(i alpha_n x + i beta_n y),

where G^A is the windowed shifted quasi-periodic Green function.  Only the
free-space (n=0, l=0) term of the kernel is logarithmically singular; it is
integrated with the trigonometric product quadrature for the weight
log(4 sin^2((t-tau)/2)), everything else with the plain trapezoidal rule.

Assembly is row-parallel (targets independent) with no shared mutable
state; assembled matrices are immutable operands afterwards.
"""

import math
import warnings

import numpy as np
import scipy.special as _sp

from ._lattice import smooth_layer_sums
from .exceptions import ConfigurationError
from .rayleigh import functional_rows_plus

EULER_GAMMA = 0.5772156649015329


def log_quadrature_weights(n):
    """Product-quadrature weight matrix R for the periodic log kernel.

    R[i, j] approximates integral_0^{2pi} log(4 sin^2((t_i - tau)/2)) f(tau)
    dtau from samples f(t_j); exact for trigonometric polynomials of degree
    < n/2.  n must be even.
    """
    n = int(n)
    if n <= 0 or n % 2 != 0:
        raise ConfigurationError("log quadrature requires an even node count")
    t = 2.0 * np.pi * np.arange(n) / n
    return log_quadrature_weights_at(t, n)


def log_quadrature_weights_at(t, n):
    """Log-kernel quadrature rows R_j(t) for arbitrary target parameters t."""
    n = int(n)
    if n <= 0 or n % 2 != 0:
        raise ConfigurationError("log quadrature requires an even node count")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    tj = 2.0 * np.pi * np.arange(n) / n
    diff = t[:, None] - tj[None, :]
    m = np.arange(1, n // 2)
    rows = np.cos(diff[:, :, None] * m[None, None, :]) / m
    out = -(4.0 * np.pi / n) * rows.sum(axis=2)
    out -= (4.0 * np.pi / n**2) * np.cos(0.5 * n * diff)
    return out


def _log_kernel_term(diff_t):
    # log(4 sin^2((t - tau)/2)); caller masks the diagonal
    s = 4.0 * np.sin(0.5 * diff_t) ** 2
    with np.errstate(divide="ignore"):
        return np.log(s)


def _self_term_split(t_targets, targets, mesh, cfg, shift, diagonal):
    """Kress split of the free-space (n=0, l=0) combined-layer term.

    Returns (D1, D2, S1, S2) such that kernel = K1 * log(4 sin^2) + K2.
    ``diagonal`` enables the analytic diagonal limits (targets == nodes).
    """
    k = cfg.k
    sx, sy = mesh.points[:, 0], mesh.points[:, 1]
    nraw = mesh.normals_raw
    jac = mesh.jacobian
    dx = targets[:, 0][:, None] - sx[None, :]
    dy = targets[:, 1][:, None] - sy[None, :]
    rho = np.hypot(dx, dy)
    g = dx * nraw[None, :, 0] + dy * nraw[None, :, 1]

    wself, _ = _window_pair(dx / shift.window_halfwidth, shift.window_flat)

    z = k * rho
    j0 = _sp.j0(z)
    j1 = _sp.j1(z)
    with np.errstate(invalid="ignore", divide="ignore"):
        h0 = j0 + 1j * _sp.y0(z)
        h1 = j1 + 1j * _sp.y1(z)
        s_full = 0.25j * h0 * jac[None, :] * wself
        d_full = 0.25j * k * h1 * g / rho * wself
        d1 = -(k / (4.0 * np.pi)) * j1 * g / rho * wself
    s1 = -(1.0 / (4.0 * np.pi)) * j0 * jac[None, :] * wself

    logterm = _log_kernel_term(t_targets[:, None] - mesh.t[None, :])
    if diagonal:
        di = np.arange(mesh.n)
        d1[di, di] = 0.0
        with np.errstate(invalid="ignore"):
            s2 = s_full - s1 * logterm
            d2 = d_full - d1 * logterm
        s2[di, di] = (0.25j - EULER_GAMMA / (2.0 * np.pi)
                      - np.log(0.5 * k * jac) / (2.0 * np.pi)) * jac
        d2[di, di] = -mesh.curvature * jac / (4.0 * np.pi)
    else:
        s2 = s_full - s1 * logterm
        d2 = d_full - d1 * logterm
    return d1, d2, s1, s2


def _window_pair(t, c):
    from ._lattice import _window_arrays
    return _window_arrays(np.asarray(t, dtype=float), c)


def _validate_geometry(mesh, cfg, shift):
    if shift.spacing <= mesh.extent:
        raise ConfigurationError(
            f"shift spacing h={shift.spacing:.6g} must exceed the vertical "
            f"extent {mesh.extent:.6g} of the scatterer")
    if mesh.diameter_x() > shift.window_flat * shift.window_halfwidth:
        raise ConfigurationError(
            "scatterer is wider than the flat region of the window; "
            "increase the window half-width A or the flat fraction c")


def layer_matrices(mesh, cfg, shift):
    """Node-to-node combined-layer matrices (D, S), quadrature included.

    (D @ psi)[i] approximates the double-layer integral of the windowed
    shifted kernel at node i, (S @ psi)[i] the single layer.
    """
    _validate_geometry(mesh, cfg, shift)
    w_trap = mesh.weight
    rlog = log_quadrature_weights(mesh.n)
    d1, d2, s1, s2 = _self_term_split(mesh.t, mesh.points, mesh, cfg, shift,
                                      diagonal=True)
    d_rest, s_rest = smooth_layer_sums(mesh.points, mesh, cfg, shift, skip_self=True)
    D = rlog * d1 + w_trap * (d2 + d_rest)
    S = rlog * s1 + w_trap * (s2 + s_rest)
    return D, S


def layer_matrices_at(points, mesh, cfg, shift):
    """Point-evaluation layer matrices (D, S) at off-boundary targets."""
    points = np.asarray(points, dtype=float)
    d_all, s_all = smooth_layer_sums(points, mesh, cfg, shift, skip_self=False)
    w_trap = mesh.weight
    return w_trap * d_all, w_trap * s_all


def boundary_layer_rows(t_targets, mesh, cfg, shift):
    """Layer matrices (D, S) at off-node boundary parameters t_targets.

    Uses the log-rule rows evaluated at the target parameters, so the
    near-diagonal singularity is integrated with full quadrature accuracy.
    """
    t_targets = np.atleast_1d(np.asarray(t_targets, dtype=float))
    targets = mesh.curve.position(t_targets)
    rlog = log_quadrature_weights_at(t_targets, mesh.n)
    d1, d2, s1, s2 = _self_term_split(t_targets, targets, mesh, cfg, shift,
                                      diagonal=False)
    d_rest, s_rest = smooth_layer_sums(targets, mesh, cfg, shift, skip_self=True,
                                       guard=False)
    w_trap = mesh.weight
    D = rlog * d1 + w_trap * (d2 + d_rest)
    S = rlog * s1 + w_trap * (s2 + s_rest)
    return D, S


def tail_matrix(targets, mesh, cfg, shift, modes, indices):
    """Rayleigh-tail matrix mapping node densities to values at targets.

    Row m, column q of the result accumulates
    -(i/2L) sigma_n / beta_n * exp(i alpha_n x + i beta_n y) * (I+_n row)_q
    over the given orders n.  The product sigma_n e^{i beta_n y} is formed
    as sum_m (-1)^m C(j,m) e^{i beta_n (m h + y)}, which never overflows for
    evaluation points above y = M- - h however deep the evanescent orders.
    """
    targets = np.asarray(targets, dtype=float)
    if len(indices) == 0:
        return np.zeros((targets.shape[0], mesh.n), dtype=complex)
    pos = [modes.position(n) for n in indices]
    alpha = modes.alpha[pos]
    beta = modes.beta[pos]
    rows = functional_rows_plus(mesh, alpha, beta, shift.gamma)
    x, y = targets[:, 0], targets[:, 1]
    sig_phase = np.zeros((len(pos), targets.shape[0]), dtype=complex)
    for m in range(1, shift.n_shifts + 1):
        cm = (-1.0) ** m * math.comb(shift.n_shifts, m)
        sig_phase += cm * np.exp(1j * beta[:, None] * (m * shift.spacing + y[None, :]))
    phase = np.exp(1j * alpha[:, None] * x[None, :]) * sig_phase
    coef = -0.5j / (cfg.L * beta)
    return (phase * coef[:, None]).T @ rows


def assemble_rhs(mesh, cfg):
    """Right-hand side -u_inc at the nodes, u_inc = exp(i(alpha x - beta y))."""
    x, y = mesh.points[:, 0], mesh.points[:, 1]
    return -np.exp(1j * (cfg.alpha * x - cfg.beta * y))


def tail_orders(modes, include_wood):
    """Orders entering the Rayleigh tail (grazing orders have beta = 0 and
    are excluded unless explicitly requested and non-degenerate)."""
    if include_wood:
        keep = modes.beta != 0.0
        return modes.indices[keep]
    return modes.tail


def combine_operator(D, S, mesh, cfg, shift, modes, include_wood_tail):
    """Full discrete operator from precomputed layer parts."""
    if shift.gamma == 0.0:
        warnings.warn("gamma = 0: the formulation is not invertible at "
                      "interior-resonance wavenumbers", stacklevel=2)
    M = 0.5 * np.eye(mesh.n, dtype=complex) + D - 1j * shift.gamma * S
    if shift.n_shifts > 0:
        idx = tail_orders(modes, include_wood_tail)
        M += tail_matrix(mesh.points, mesh, cfg, shift, modes, idx)
    return M


def assemble_operator(mesh, cfg, shift, modes, *, include_wood_tail):
    """Assemble the discrete combined-field operator matrix.

    With ``include_wood_tail`` the tail keeps every truncated order with
    nonzero beta_n (the away-from-grazing full operator); without it the
    grazing orders are excluded and handled by the finite-rank correction.
    """
    D, S = layer_matrices(mesh, cfg, shift)
    return combine_operator(D, S, mesh, cfg, shift, modes, include_wood_tail)
