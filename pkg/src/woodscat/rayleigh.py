"""Plane-wave mode bookkeeping and the boundary functionals I+, I-, I~.

For each integer order n the grating supports a plane wave with horizontal
wavenumber alpha_n = alpha + 2*pi*n/L and vertical wavenumber
beta_n = sqrt(k^2 - alpha_n^2) (principal branch, Im beta_n >= 0).  Orders
with |beta_n| below the configured threshold are classified as grazing
("Wood") modes and handled by the finite-rank correction in woodsolve.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError

# |beta_n| <= SNAP_REL * k is flushed to exactly zero so that the grazing
# diagonal matrix vanishes identically at an exact Wood configuration.
SNAP_REL = 1e-14


@dataclass(frozen=True)
class ModeSet:
    """Truncated family of Rayleigh orders for one (k, alpha, L, shift) setup.

    indices : (m,) integer orders, contiguous from min(N)-N_ev to max(N)+N_ev
    alpha : (m,) horizontal wavenumbers alpha_n
    beta : (m,) complex vertical wavenumbers, Im >= 0, grazing snapped to 0
    sigma : (m,) shift factors (1 - exp(i beta_n h))^j - 1
    propagating : (p,) orders with k^2 - alpha_n^2 > 0 (strict)
    wood : (r,) grazing orders, |beta_n| <= wood_threshold * k
    tail : (m-r,) indices used in the Rayleigh-tail operator (wood removed)
    """

    k: float
    indices: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    sigma: np.ndarray
    propagating: np.ndarray
    wood: np.ndarray
    tail: np.ndarray

    def position(self, n):
        """Array position of order n in ``indices``."""
        pos = int(n) - int(self.indices[0])
        if pos < 0 or pos >= self.indices.size or self.indices[pos] != n:
            raise KeyError(f"order {n} outside the truncated mode set")
        return pos

    def alpha_of(self, n):
        return self.alpha[self.position(n)]

    def beta_of(self, n):
        return self.beta[self.position(n)]

    def sigma_of(self, n):
        return self.sigma[self.position(n)]

    @property
    def mask_wood(self):
        return np.isin(self.indices, self.wood)


def sigma_factors(beta, spacing, n_shifts):
    """Shift factors sigma_n = (1 - e^{i beta_n h})^j - 1, evaluated stably.

    Expanding the power binomially keeps full relative accuracy when
    e^{i beta h} is exponentially small (deep evanescent orders), where the
    direct form loses sigma entirely to cancellation against the -1.
    """
    eps = np.exp(1j * np.asarray(beta, dtype=complex) * spacing)
    out = np.zeros(eps.shape, dtype=complex)
    for m in range(n_shifts, 0, -1):
        out = out * eps + (-1.0) ** m * math.comb(n_shifts, m)
    return out * eps


def build_modes(cfg, shift):
    """Classify orders and build the truncated mode set.

    The truncation keeps every propagating order plus ``shift.n_evanescent``
    evanescent orders on each side; grazing orders are listed separately and
    excluded from the tail.
    """
    k, L, alpha0 = cfg.k, cfg.L, cfg.alpha
    g = 2.0 * np.pi / L

    # propagating range: k^2 - (alpha0 + g n)^2 > 0
    n_lo = int(np.floor((-k - alpha0) / g))
    n_hi = int(np.ceil((k - alpha0) / g))
    cand = np.arange(n_lo - 1, n_hi + 2)
    prop = cand[k**2 - (alpha0 + g * cand) ** 2 > 0.0]
    if prop.size == 0:
        raise ConfigurationError("no propagating orders; invalid wave configuration")

    indices = np.arange(prop[0] - shift.n_evanescent, prop[-1] + shift.n_evanescent + 1)
    alpha = alpha0 + g * indices
    beta = np.sqrt((k**2 - alpha**2).astype(complex))
    beta[np.abs(beta) <= SNAP_REL * k] = 0.0

    wood_mask = np.abs(beta) <= shift.wood_threshold * k
    wood = indices[wood_mask]
    tail = indices[~wood_mask]

    sigma = sigma_factors(beta, shift.spacing, shift.n_shifts)

    return ModeSet(k=k, indices=indices, alpha=alpha, beta=beta, sigma=sigma,
                   propagating=prop, wood=wood, tail=tail)


def _stable_sinc(t):
    # sin(t)/t for complex t, series branch near zero
    t = np.asarray(t, dtype=complex)
    small = np.abs(t) < 1e-4
    out = np.empty(t.shape, dtype=complex)
    ts = t[small]
    out[small] = 1.0 - ts**2 / 6.0 + ts**4 / 120.0
    tb = t[~small]
    out[~small] = np.sin(tb) / tb
    return out


def functional_rows_plus(mesh, alpha, beta, gamma):
    """Quadrature rows of I+ for each (alpha_n, beta_n) pair.

    Returns a (m, n_nodes) matrix F with I+_n[psi] = F[n] @ psi.  The rows
    are trapezoidal-rule weights of the combined normal-derivative/-i*gamma
    functional against exp(-i alpha_n x' - i beta_n y').
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    x, y = mesh.points[:, 0], mesh.points[:, 1]
    nraw = mesh.normals_raw
    phase = np.exp(-1j * (alpha[:, None] * x[None, :] + beta[:, None] * y[None, :]))
    deriv = alpha[:, None] * nraw[None, :, 0] + beta[:, None] * nraw[None, :, 1]
    return mesh.weight * phase * (-1j) * (deriv + gamma * mesh.jacobian[None, :])


def functional_rows_minus(mesh, alpha, beta, gamma):
    """Quadrature rows of I- (exponent exp(-i alpha_n x' + i beta_n y'))."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    x, y = mesh.points[:, 0], mesh.points[:, 1]
    nraw = mesh.normals_raw
    phase = np.exp(-1j * (alpha[:, None] * x[None, :] - beta[:, None] * y[None, :]))
    deriv = alpha[:, None] * nraw[None, :, 0] - beta[:, None] * nraw[None, :, 1]
    return mesh.weight * phase * (-1j) * (deriv + gamma * mesh.jacobian[None, :])


def functional_rows_tilde(mesh, alpha, beta, gamma):
    """Quadrature rows of the sinc-regularized functional I~.

    I~ tests against exp(-i alpha_n x') * y' * sinc(beta_n y'); its normal
    derivative uses d/dy'[y' sinc(beta y')] = cos(beta y'), which is stable
    straight through beta = 0.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    x, y = mesh.points[:, 0], mesh.points[:, 1]
    nraw = mesh.normals_raw
    phase = np.exp(-1j * alpha[:, None] * x[None, :])
    ysinc = y[None, :] * _stable_sinc(beta[:, None] * y[None, :])
    dx = -1j * alpha[:, None] * ysinc * nraw[None, :, 0]
    dy = np.cos(beta[:, None] * y[None, :]) * nraw[None, :, 1]
    return mesh.weight * phase * (dx + dy - 1j * gamma * ysinc * mesh.jacobian[None, :])


def functional_I(side, mesh, psi, n, cfg, modes, gamma):
    """Scalar I+ or I- of a node density for a single order n."""
    psi = np.asarray(psi)
    if psi.shape[0] != mesh.n:
        raise ConfigurationError("density length does not match the mesh")
    rows = functional_rows_plus if side == "plus" else functional_rows_minus
    if side not in ("plus", "minus"):
        raise ConfigurationError(f"side must be 'plus' or 'minus', got {side!r}")
    row = rows(mesh, [modes.alpha_of(n)], [modes.beta_of(n)], gamma)
    return complex(row[0] @ psi)


def functional_I_tilde(mesh, psi, n, cfg, modes, gamma):
    """Scalar I~ of a node density for a single order n."""
    psi = np.asarray(psi)
    if psi.shape[0] != mesh.n:
        raise ConfigurationError("density length does not match the mesh")
    row = functional_rows_tilde(mesh, [modes.alpha_of(n)], [modes.beta_of(n)], gamma)
    return complex(row[0] @ psi)
