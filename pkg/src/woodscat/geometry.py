"""Parametric boundary curves and the Nystrom mesh of the unit-cell scatterer.

Curves are supplied analytically (position plus two derivatives in the
parameter t on [0, 2pi)); the quadrature rules downstream rely on exact
tangents, normals and curvatures, so point-sampled geometry is deliberately
not supported.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError

EXTENT_MARGIN = 1e-12
EXTENT_SAMPLES_PER_NODE = 64


class ParametricCurve:
    """Closed smooth curve r(t), t in [0, 2pi), with two derivatives.

    Subclasses implement ``position``, ``velocity`` and ``acceleration``,
    each mapping a parameter array of shape (m,) to points of shape (m, 2).
    """

    def position(self, t):
        raise NotImplementedError

    def velocity(self, t):
        raise NotImplementedError

    def acceleration(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class Circle(ParametricCurve):
    radius: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ConfigurationError("circle radius must be positive")

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.center[0] + self.radius * np.cos(t),
                         self.center[1] + self.radius * np.sin(t)], axis=-1)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def acceleration(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.cos(t), -np.sin(t)], axis=-1)


@dataclass(frozen=True)
class Star(ParametricCurve):
    """Five-lobed star r(t) = base * (1 + 0.1 cos 5t + 0.01 cos 10t)."""

    base: float = 1.0

    def __post_init__(self):
        if self.base <= 0.0:
            raise ConfigurationError("star base scale must be positive")

    def _radius(self, t):
        return 1.0 + 0.1 * np.cos(5 * t) + 0.01 * np.cos(10 * t)

    def _radius_d1(self, t):
        return -0.5 * np.sin(5 * t) - 0.1 * np.sin(10 * t)

    def _radius_d2(self, t):
        return -2.5 * np.cos(5 * t) - 1.0 * np.cos(10 * t)

    def position(self, t):
        t = np.asarray(t, dtype=float)
        r = self.base * self._radius(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        r = self.base * self._radius(t)
        rp = self.base * self._radius_d1(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([rp * c - r * s, rp * s + r * c], axis=-1)

    def acceleration(self, t):
        t = np.asarray(t, dtype=float)
        r = self.base * self._radius(t)
        rp = self.base * self._radius_d1(t)
        rpp = self.base * self._radius_d2(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([(rpp - r) * c - 2 * rp * s,
                         (rpp - r) * s + 2 * rp * c], axis=-1)


def make_circle(radius, center=(0.0, 0.0)):
    """Circle of given radius about ``center``."""
    return Circle(radius=float(radius), center=(float(center[0]), float(center[1])))


def make_star(base=1.0):
    """Scaled five-lobed star-shaped cross section."""
    return Star(base=float(base))


@dataclass(frozen=True)
class NystromMesh:
    """Equispaced-parameter discretization of a closed boundary curve.

    Attributes
    ----------
    t : (n,) node parameters 2*pi*i/n
    points : (n, 2) node positions
    velocity : (n, 2) dr/dt at the nodes
    jacobian : (n,) |dr/dt|
    normals : (n, 2) outward unit normals
    curvature : (n,) signed curvature w.r.t. the outward normal
    y_min, y_max : vertical extent of the full curve (dense sampling)
    curve : the underlying analytic curve
    """

    t: np.ndarray
    points: np.ndarray
    velocity: np.ndarray
    jacobian: np.ndarray
    normals: np.ndarray
    curvature: np.ndarray
    y_min: float
    y_max: float
    curve: ParametricCurve = field(repr=False)

    @property
    def n(self):
        return self.t.shape[0]

    @property
    def extent(self):
        """Vertical extent M+ - M- of the scatterer."""
        return self.y_max - self.y_min

    @property
    def normals_raw(self):
        """Outward normals scaled by the Jacobian, nu * |dr/dt|."""
        return self.normals * self.jacobian[:, None]

    @property
    def weight(self):
        """Trapezoidal quadrature weight 2*pi/n (per node, uniform)."""
        return 2.0 * np.pi / self.n

    def diameter_x(self):
        """Horizontal diameter of the node set (window flat-region check)."""
        return float(self.points[:, 0].max() - self.points[:, 0].min())


def _orientation(curve, samples=720):
    # signed area via (1/2) closed-integral of (x y' - y x') dt, trapezoid
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    p = curve.position(t)
    v = curve.velocity(t)
    area = 0.5 * np.mean(p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]) * 2.0 * np.pi
    return 1.0 if area >= 0.0 else -1.0


def _refine_extremum(curve, t0, iterations=30):
    # Newton on y'(t) = 0 from the best sample; analytic derivatives make
    # this machine-accurate for smooth curves
    t = float(t0)
    for _ in range(iterations):
        yp = float(curve.velocity(np.array([t]))[0, 1])
        ypp = float(curve.acceleration(np.array([t]))[0, 1])
        if ypp == 0.0:
            break
        step = yp / ypp
        t -= step
        if abs(step) < 1e-15:
            break
    return float(curve.position(np.array([t]))[0, 1])


def build_mesh(curve, n_nodes):
    """Build the Nystrom mesh with ``n_nodes`` equispaced parameter nodes.

    ``n_nodes`` must be even (the logarithmic quadrature rule requires it).
    The vertical extent is found by sampling 64 * n_nodes parameter values
    and padding by a small safety margin so every node lies strictly inside.
    """
    n_nodes = int(n_nodes)
    if n_nodes <= 0 or n_nodes % 2 != 0:
        raise ConfigurationError(f"node count must be a positive even integer, got {n_nodes}")

    t = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    p = curve.position(t)
    v = curve.velocity(t)
    a = curve.acceleration(t)
    jac = np.hypot(v[:, 0], v[:, 1])
    if np.any(jac <= 0.0):
        raise ConfigurationError("curve parametrization is not regular (|dr/dt| = 0)")

    orient = _orientation(curve)
    normals = orient * np.stack([v[:, 1], -v[:, 0]], axis=-1) / jac[:, None]
    curvature = orient * (v[:, 0] * a[:, 1] - v[:, 1] * a[:, 0]) / jac**3

    ts = np.linspace(0.0, 2.0 * np.pi, EXTENT_SAMPLES_PER_NODE * n_nodes, endpoint=False)
    ys = curve.position(ts)[:, 1]
    scale = max(1.0, float(np.abs(ys).max()))
    y_top = max(float(ys.max()), _refine_extremum(curve, ts[int(np.argmax(ys))]))
    y_bot = min(float(ys.min()), _refine_extremum(curve, ts[int(np.argmin(ys))]))
    y_min = y_bot - EXTENT_MARGIN * scale
    y_max = y_top + EXTENT_MARGIN * scale

    return NystromMesh(t=t, points=p, velocity=v, jacobian=jac, normals=normals,
                       curvature=curvature, y_min=y_min, y_max=y_max, curve=curve)
