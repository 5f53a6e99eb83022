"""Post-processing: Rayleigh coefficients, efficiencies, energy balance and
field evaluation above, below and on the boundary of the array.

Coefficient conventions: above the array the scattered field is
sum_n C+_n exp(i alpha_n x + i beta_n y), below it
sum_n C-_n exp(i alpha_n x - i beta_n y).  For non-grazing orders
C+-_n = (i/2L) I+-_n[psi] / beta_n; grazing orders use the regularized
quotients (d_j and -d_j/sigma - I~/L) that never divide by beta.
"""

import csv
import json
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ConfigurationError
from .operator import boundary_layer_rows, layer_matrices_at, tail_matrix, tail_orders
from .rayleigh import (build_modes, functional_rows_minus, functional_rows_plus,
                       functional_rows_tilde)

INSIDE_TEST_SAMPLES = 2048

# evaluation-side Rayleigh truncation: aim for e^-EVAL_DECAY_TARGET series
# error, capped so no intermediate exponential can overflow
EVAL_DECAY_TARGET = 40.0
EVAL_EXPONENT_CAP = 600.0


@dataclass(frozen=True)
class FieldSample:
    """Scattered-field value at one exterior point."""

    x: float
    y: float
    value: complex
    region: str  # "omega_plus", "omega_minus" or "boundary_strip"


def incident_field(cfg, points):
    """Incident plane wave exp(i(alpha x - beta y)) at the given points."""
    points = np.asarray(points, dtype=float)
    return np.exp(1j * (cfg.alpha * points[..., 0] - cfg.beta * points[..., 1]))


def rayleigh_coefficients(psi, d, mesh, cfg, shift, modes):
    """(C+_n, C-_n) over modes.indices from a solved density.

    Grazing orders take the regularized forms when correction coefficients d
    are available; with an empty d (classical j = 0 run straight through a
    Wood anomaly) their coefficients are reported as zero since the spectral
    quotient is undefined there.
    """
    psi = np.asarray(psi, dtype=complex)
    gamma = shift.gamma
    ip = functional_rows_plus(mesh, modes.alpha, modes.beta, gamma) @ psi
    im = functional_rows_minus(mesh, modes.alpha, modes.beta, gamma) @ psi
    c_plus = np.zeros(modes.indices.size, dtype=complex)
    c_minus = np.zeros(modes.indices.size, dtype=complex)
    regular = ~modes.mask_wood
    c_plus[regular] = 0.5j / cfg.L * ip[regular] / modes.beta[regular]
    c_minus[regular] = 0.5j / cfg.L * im[regular] / modes.beta[regular]

    if modes.wood.size:
        pos = [modes.position(n) for n in modes.wood]
        if len(d):
            rows = functional_rows_tilde(mesh, modes.alpha[pos], modes.beta[pos], gamma)
            itilde = rows @ psi
            sigma = modes.sigma[pos]
            # -d/sigma = (i/2L) I+/beta exactly; equals d at the anomaly
            # itself (sigma = -1) and stays regular in the neighborhood
            c_plus[pos] = -d / sigma
            c_minus[pos] = -d / sigma - itilde / cfg.L
        else:
            nonzero = [p for p in pos if modes.beta[p] != 0.0]
            c_plus[nonzero] = 0.5j / cfg.L * ip[nonzero] / modes.beta[nonzero]
            c_minus[nonzero] = 0.5j / cfg.L * im[nonzero] / modes.beta[nonzero]
    return c_plus, c_minus


def efficiencies(c_plus, c_minus, modes, cfg):
    """(e+_n, e-_n) = |C+-_n|^2 beta_n / beta over the propagating orders."""
    pos = [modes.position(n) for n in modes.propagating]
    ratio = modes.beta[pos].real / cfg.beta
    return np.abs(c_plus[pos]) ** 2 * ratio, np.abs(c_minus[pos]) ** 2 * ratio


def energy_balance_error(c_plus, c_minus, modes, cfg):
    """Defect |2 Re(C_0^-) + sum over propagating orders of (e+_n + e-_n)|.

    Green's identity applied between horizontal lines above and below the
    array gives sum(e+_n + e-_n) + 2 Re(C_0^-) = 0 for a lossless array:
    the extinction term comes from |1 + C_0^-|^2 - 1, the coherent overlap
    of the incident wave with the zeroth transmitted order.
    """
    ep, em = efficiencies(c_plus, c_minus, modes, cfg)
    c0m = c_minus[modes.position(0)]
    return float(abs(2.0 * c0m.real + ep.sum() + em.sum()))


def _inside_obstacle(mesh, cfg, points):
    # winding test against a dense polygon of the curve, x reduced to the
    # obstacle's lattice copy
    t = np.linspace(0.0, 2.0 * np.pi, INSIDE_TEST_SAMPLES, endpoint=False)
    poly = mesh.curve.position(t)
    cx = poly[:, 0].mean()
    px = points[:, 0] - cx
    px = px - cfg.L * np.round(px / cfg.L) + cx
    py = points[:, 1]
    inside = np.zeros(points.shape[0], dtype=bool)
    band = (py > mesh.y_min) & (py < mesh.y_max)
    if not band.any():
        return inside
    x0, y0 = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for idx in np.nonzero(band)[0]:
        xq, yq = px[idx], py[idx]
        crosses = (y0 > yq) != (y1 > yq)
        xs = x0[crosses] + (yq - y0[crosses]) * (x1[crosses] - x0[crosses]) \
            / (y1[crosses] - y0[crosses])
        inside[idx] = (np.count_nonzero(xs > xq) % 2) == 1
    return inside


def _evaluation_modes(solution, margin):
    """Mode set for field evaluation, widened until the evanescent series
    reaches ~e^-EVAL_DECAY_TARGET at the given decay margin.

    The operator truncation fixes the density's accuracy; the evaluation
    series is an independent numerical choice, and the functionals
    I+-_n[psi] are computable for any order.
    """
    mesh, cfg, shift = solution.mesh, solution.cfg, solution.shift
    n_eval = shift.n_evanescent
    if margin > 0.0:
        beta_needed = EVAL_DECAY_TARGET / margin
        y_big = max(abs(mesh.y_min), abs(mesh.y_max), margin + mesh.extent + shift.spacing)
        beta_cap = EVAL_EXPONENT_CAP / y_big
        beta_cut = min(beta_needed, beta_cap)
        n_eval = max(n_eval, int(np.ceil(beta_cut * cfg.L / (2.0 * np.pi))) + 1)
    if n_eval == shift.n_evanescent:
        return solution.modes
    return build_modes(cfg, replace(shift, n_evanescent=n_eval))


def _minus_coefficients(solution, modes_eval):
    """C-_n over an (extended) evaluation mode set."""
    sol_modes = solution.modes
    if modes_eval is sol_modes:
        return solution.c_minus
    mesh, cfg, shift = solution.mesh, solution.cfg, solution.shift
    im = functional_rows_minus(mesh, modes_eval.alpha, modes_eval.beta,
                               shift.gamma) @ solution.psi
    c_minus = np.zeros(modes_eval.indices.size, dtype=complex)
    regular = ~modes_eval.mask_wood
    c_minus[regular] = 0.5j / cfg.L * im[regular] / modes_eval.beta[regular]
    for n in modes_eval.wood:
        c_minus[modes_eval.position(n)] = solution.c_minus[sol_modes.position(n)]
    return c_minus


def _tail_and_grazing(solution, modes_eval, pts):
    """Rayleigh tail plus grazing plane waves of the upward representation."""
    mesh, cfg, shift = solution.mesh, solution.cfg, solution.shift
    val = np.zeros(pts.shape[0], dtype=complex)
    if shift.n_shifts > 0:
        idx = tail_orders(modes_eval, include_wood=solution.path == "direct")
        val += tail_matrix(pts, mesh, cfg, shift, modes_eval, idx) @ solution.psi
    if solution.path == "woodbury" and len(solution.d):
        pos = [modes_eval.position(n) for n in modes_eval.wood]
        w = np.exp(1j * (pts[:, 0][:, None] * modes_eval.alpha[pos][None, :]
                         + pts[:, 1][:, None] * modes_eval.beta[pos][None, :]))
        val += w @ solution.d
    return val


def layer_representation_field(solution, points):
    """Scattered field from the upward representation: windowed layer
    potential plus Rayleigh tail (plus grazing plane waves on the woodbury
    path).

    The tail series converges for y > M+ - h; the evaluation truncation is
    widened according to the decay margin above that line.
    """
    points = np.asarray(points, dtype=float)
    mesh, cfg, shift = solution.mesh, solution.cfg, solution.shift
    valid_line = mesh.y_max - shift.spacing
    if np.any(points[:, 1] <= valid_line):
        raise ConfigurationError(
            "layer representation requested below its convergence line y = M+ - h")
    D, S = layer_matrices_at(points, mesh, cfg, shift)
    val = (D - 1j * shift.gamma * S) @ solution.psi
    margin = float(points[:, 1].min()) - valid_line
    modes_eval = _evaluation_modes(solution, margin)
    return val + _tail_and_grazing(solution, modes_eval, points)


def downward_series_field(solution, points):
    """Scattered field from the downward Rayleigh series alone (valid for
    y < M-)."""
    points = np.asarray(points, dtype=float)
    mesh = solution.mesh
    if np.any(points[:, 1] >= mesh.y_min):
        raise ConfigurationError(
            "downward series requested above its convergence line y = M-")
    margin = mesh.y_min - float(points[:, 1].max())
    modes_eval = _evaluation_modes(solution, margin)
    c_minus = _minus_coefficients(solution, modes_eval)
    phases = np.exp(1j * (points[:, 0][:, None] * modes_eval.alpha[None, :]
                          - points[:, 1][:, None] * modes_eval.beta[None, :]))
    return phases @ c_minus


def scattered_field(solution, points):
    """Scattered field u^s at exterior points, with region tags.

    The two representations overlap in the strip M+ - h < y < M-; points
    are routed to whichever side has the larger evanescent decay margin
    (they agree there, which ``downward_series_field`` versus
    ``layer_representation_field`` makes testable).  Returns
    (values, regions) with regions tagged relative to y = M- - h.
    """
    points = np.asarray(points, dtype=float)
    mesh, shift = solution.mesh, solution.shift
    y_split = mesh.y_min - shift.spacing

    if _inside_obstacle(mesh, solution.cfg, points).any():
        raise ConfigurationError("field evaluation point inside an obstacle")

    values = np.zeros(points.shape[0], dtype=complex)
    regions = np.where(points[:, 1] >= y_split, "omega_plus", "omega_minus")
    strip = (points[:, 1] >= y_split) & (points[:, 1] < mesh.y_min)
    regions = np.where(strip, "boundary_strip", regions)

    y_mid = 0.5 * ((mesh.y_max - shift.spacing) + mesh.y_min)
    upper = points[:, 1] >= y_mid
    if upper.any():
        values[upper] = layer_representation_field(solution, points[upper])
    if (~upper).any():
        values[~upper] = downward_series_field(solution, points[~upper])
    return values, regions


def near_field(solution, points):
    """FieldSample records of the scattered field at the given points."""
    points = np.asarray(points, dtype=float)
    values, regions = scattered_field(solution, points)
    return [FieldSample(x=float(p[0]), y=float(p[1]), value=complex(v), region=str(r))
            for p, v, r in zip(points, values, regions)]


def _trig_interpolate(values, t):
    """Trigonometric interpolation of periodic node samples at parameters t."""
    values = np.asarray(values, dtype=complex)
    n = values.size
    coef = np.fft.fft(values) / n
    m = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    interior = np.abs(m) != n // 2
    out = np.exp(1j * t[:, None] * m[None, interior]) @ coef[interior]
    # even node count: the Nyquist coefficient interpolates as cos((n/2) t)
    nyq = np.nonzero(np.abs(m) == n // 2)[0]
    for idx in nyq:
        out += coef[idx] * np.cos(0.5 * n * t)
    return out


def boundary_mismatch(solution, t_targets):
    """Boundary-condition residual u^s + u^inc at off-node parameters.

    The trace of the scattered field is taken from the exterior jump
    relation psi/2 + (combined layer) psi + tail; the log-singular part is
    integrated with the quadrature rows evaluated at the target parameters.
    """
    mesh, cfg, shift = solution.mesh, solution.cfg, solution.shift
    t_targets = np.atleast_1d(np.asarray(t_targets, dtype=float))
    node_spacing = 2.0 * np.pi / mesh.n
    if np.any(np.min(np.abs((t_targets[:, None] - mesh.t[None, :] + np.pi)
                            % (2 * np.pi) - np.pi), axis=1) < 1e-9 * node_spacing):
        raise ConfigurationError("boundary trace targets must be off-node")

    targets = mesh.curve.position(t_targets)
    D, S = boundary_layer_rows(t_targets, mesh, cfg, shift)
    trace = (D - 1j * shift.gamma * S) @ solution.psi
    trace += 0.5 * _trig_interpolate(solution.psi, t_targets)
    modes_eval = _evaluation_modes(solution, shift.spacing - mesh.extent)
    trace += _tail_and_grazing(solution, modes_eval, targets)
    return trace + incident_field(cfg, targets)


def write_field_csv(path, points, values):
    """Field grid as CSV rows (x, y, Re u, Im u)."""
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "re_u", "im_u"])
        for p, v in zip(points, values):
            writer.writerow([repr(float(p[0])), repr(float(p[1])),
                             repr(float(v.real)), repr(float(v.imag))])


def efficiency_table(solution):
    """Efficiency table rows as plain dicts (JSON/CSV ready)."""
    modes = solution.modes
    rows = []
    for i, n in enumerate(modes.propagating):
        pos = modes.position(n)
        rows.append({
            "order": int(n),
            "alpha_n": float(modes.alpha[pos]),
            "beta_n": float(modes.beta[pos].real),
            "eff_plus": float(solution.eff_plus[i]),
            "eff_minus": float(solution.eff_minus[i]),
        })
    return rows


def write_efficiency_csv(path, solution):
    rows = efficiency_table(solution)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def write_efficiency_json(path, solution):
    with open(path, "w") as fh:
        json.dump({"efficiencies": efficiency_table(solution),
                   "energy_balance_error": solution.energy_balance_error},
                  fh, indent=2, sort_keys=True)
