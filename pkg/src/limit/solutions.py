#!/usr/bin/env python
"""
Canonical solutions of the limit problems on the plane and the half-plane.

    plane:       -Laplace(v) = 2 K0 |x|^(2 alpha) e^v
    half-plane:  -Laplace(v) = 2 K0 e^v in t > 0,  d_nu v = 2 h0 e^(v/2) on t = 0

with the radial family v = log(4 b (1+alpha)^2 / K0) - 2 log(1 + b |x|^(2+2 alpha))
and the shifted half-plane family
V0(s, t) = log 4 / (1 + K0 (s^2 + (t + h0/K0)^2))^2.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from errors import PreconditionError

logger = logging.getLogger(__name__)

PLANE = "plane"
HALFPLANE = "halfplane"

# eighth-order central stencils, offsets -4..4
SECOND_DERIVATIVE = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
FIRST_DERIVATIVE = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
OFFSETS = np.arange(-4, 5)
PLANE_RELATIVE_STEP = 0.02
HALFPLANE_STEP = 0.01

GAUSS_NODES = 16
LOG_PANEL_WIDTH = 0.5
NEGLIGIBLE_MASS = 1e-14


def _points(grid):
    points = np.atleast_2d(np.asarray(grid, dtype=float))
    if points.ndim != 2 or points.shape[1] != 2:
        raise PreconditionError("grid must be an (n, 2) array of points")
    return points


def _stencil_sum(func, points, steps, axis, weights):
    unit = np.zeros(2)
    unit[axis] = 1.0
    total = np.zeros(len(points))
    for k, w in zip(OFFSETS, weights):
        if w != 0.0:
            total += w * func(points + np.outer(k * steps, unit))
    return total


def laplacian_fd(func, points, steps):
    """Eighth-order finite-difference Laplacian of func at points with per-point steps."""
    steps = np.broadcast_to(np.asarray(steps, dtype=float), (len(points),))
    return (_stencil_sum(func, points, steps, 0, SECOND_DERIVATIVE)
            + _stencil_sum(func, points, steps, 1, SECOND_DERIVATIVE)) / steps ** 2


def derivative_fd(func, points, steps, axis):
    """Eighth-order finite-difference first derivative along an axis."""
    steps = np.broadcast_to(np.asarray(steps, dtype=float), (len(points),))
    return _stencil_sum(func, points, steps, axis, FIRST_DERIVATIVE) / steps


def log_panels(low, high, breakpoints=(), width=LOG_PANEL_WIDTH, nodes=GAUSS_NODES):
    """
    Composite Gauss-Legendre rule in log r on [low, high].

    Panel edges include every breakpoint inside the interval.

    Returns:
        tuple: (radii, weights) with the Jacobian r already in the weights
    """
    edges = sorted({math.log(low), math.log(high)}
                   | {math.log(b) for b in breakpoints if low < b < high})
    xi, wi = roots_legendre(nodes)
    radii, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        count = max(1, math.ceil((b - a) / width))
        cuts = np.linspace(a, b, count + 1)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            half = 0.5 * (hi - lo)
            s = lo + half * (xi + 1.0)
            r = np.exp(s)
            radii.append(r)
            weights.append(half * wi * r)
    return np.concatenate(radii), np.concatenate(weights)


@dataclass(frozen=True)
class PlaneSolution:
    """v(x) = log(4 b (1+alpha)^2 / K0) - 2 log(1 + b |x|^(2+2 alpha))."""

    K0: float = 1.0
    alpha: float = 0.0
    b: float = 1.0

    domain = PLANE

    def __post_init__(self):
        if not self.K0 > 0:
            raise PreconditionError("K0 must be positive")
        if not self.alpha > -1:
            raise PreconditionError("alpha must be > -1")
        if not self.b > 0:
            raise PreconditionError("the scale b must be positive")

    @property
    def exponent(self):
        return 2.0 + 2.0 * self.alpha

    @property
    def peak_radius(self):
        return self.b ** (-1.0 / self.exponent)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return (math.log(4.0 * self.b * (1.0 + self.alpha) ** 2 / self.K0)
                - 2.0 * np.log1p(self.b * r ** self.exponent))

    def __call__(self, points):
        return self.radial(np.linalg.norm(_points(points), axis=1))

    def radial_weight(self, r):
        """2 K0 r^(2 alpha) e^v(r)."""
        r = np.asarray(r, dtype=float)
        s = self.b * r ** self.exponent
        return 8.0 * self.b * (1.0 + self.alpha) ** 2 * r ** (2.0 * self.alpha) / (1.0 + s) ** 2

    def weight(self, points):
        return self.radial_weight(np.linalg.norm(_points(points), axis=1))

    def boundary_weight(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))


@dataclass(frozen=True)
class HalfPlaneSolution:
    """V0(s, t) = log 4 / (1 + K0 (s^2 + (t + h0/K0)^2))^2."""

    K0: float = 1.0
    h0: float = 0.0

    domain = HALFPLANE

    def __post_init__(self):
        if not self.K0 > 0:
            raise PreconditionError("K0 must be positive")

    def quadric(self, points):
        points = _points(points)
        return self.K0 * (points[:, 0] ** 2 + (points[:, 1] + self.h0 / self.K0) ** 2)

    def __call__(self, points):
        return math.log(4.0) - 2.0 * np.log1p(self.quadric(points))

    def weight(self, points):
        """2 K0 e^V0."""
        return 8.0 * self.K0 / (1.0 + self.quadric(points)) ** 2

    def boundary_weight(self, s):
        """h0 e^(V0/2) on t = 0."""
        s = np.asarray(s, dtype=float)
        return 2.0 * self.h0 / (1.0 + self.K0 * s ** 2 + self.h0 ** 2 / self.K0)


@dataclass(frozen=True)
class LinearizedWitness:
    """
    Z0(s, t) = 2t / (1 + K0 (s^2 + (t + h0/K0)^2)) - 1/h0 for h0 < 0.

    Solves -Laplace(Z0) = 2 K0 e^V0 (Z0 + h0/K0 + 1/h0) in t > 0 and
    d_nu Z0 = h0 e^(V0/2) Z0 on t = 0.
    """

    K0: float = 1.0
    h0: float = -1.0

    def __post_init__(self):
        if not self.K0 > 0:
            raise PreconditionError("K0 must be positive")
        if not self.h0 < 0:
            raise PreconditionError("the linearized witness needs h0 < 0")

    @property
    def solution(self):
        return HalfPlaneSolution(self.K0, self.h0)

    def argument(self, points):
        """The positive quantity 2t/(1+Q) - 1/h0 (Z0 itself)."""
        points = _points(points)
        return 2.0 * points[:, 1] / (1.0 + self.solution.quadric(points)) - 1.0 / self.h0

    __call__ = argument

    def gradient(self, points):
        points = _points(points)
        s, t = points[:, 0], points[:, 1]
        tau = t + self.h0 / self.K0
        q = 1.0 + self.solution.quadric(points)
        ds = -4.0 * self.K0 * t * s / q ** 2
        dt = 2.0 / q - 4.0 * self.K0 * t * tau / q ** 2
        return np.column_stack([ds, dt])


@dataclass(frozen=True)
class HeavyTailField:
    """
    Manufactured field v = log(1 / (1 + |x|^2)) whose weight 2 K0 e^v decays
    like |x|^-2, so that its mass is infinite.
    """

    K0: float = 1.0

    domain = PLANE
    alpha = 0.0

    def __call__(self, points):
        return -np.log1p(np.sum(_points(points) ** 2, axis=1))

    def radial_weight(self, r):
        return 2.0 * self.K0 / (1.0 + np.asarray(r, dtype=float) ** 2)

    def weight(self, points):
        return self.radial_weight(np.linalg.norm(_points(points), axis=1))

    def boundary_weight(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))


def plane_solution(K0=1.0, alpha=0.0, b=1.0):
    return PlaneSolution(float(K0), float(alpha), float(b))


def halfplane_solution(K0=1.0, h0=0.0):
    return HalfPlaneSolution(float(K0), float(h0))


def z0(K0=1.0, h0=-1.0):
    return LinearizedWitness(float(K0), float(h0))


def plane_residual(sol, grid):
    """
    max |Laplace(v) + 2 K0 |x|^(2 alpha) e^v| over the grid, with the
    Laplacian from eighth-order differences at step 0.02 |x|.

    Raises:
        PreconditionError: when alpha < 0 and the grid touches the origin
    """
    points = _points(grid)
    norms = np.linalg.norm(points, axis=1)
    if sol.alpha < 0 and np.any(norms == 0.0):
        raise PreconditionError("the grid touches the origin where |x|^(2 alpha) is singular")
    steps = np.where(norms > 0, PLANE_RELATIVE_STEP * norms, PLANE_RELATIVE_STEP)
    defect = laplacian_fd(sol, points, steps) + sol.weight(points)
    return float(np.max(np.abs(defect)))


def plane_total_mass(sol, R):
    """int_{B_R} 2 K0 |x|^(2 alpha) e^v by Gauss-Legendre quadrature in log r."""
    if not R > 0:
        raise PreconditionError("the truncation radius must be positive")
    low = min((NEGLIGIBLE_MASS / sol.b) ** (1.0 / sol.exponent), 1e-3 * R)
    r, w = log_panels(low, R, breakpoints=(sol.peak_radius,))
    mass = 2.0 * math.pi * float(np.sum(w * r * sol.radial_weight(r)))
    logger.debug("plane mass on B_%g: %.15g", R, mass)
    return mass


def plane_mass_exact(sol, R):
    """Closed form 8 pi (1+alpha) S / (1+S), S = b R^(2+2 alpha)."""
    S = sol.b * R ** sol.exponent
    return 8.0 * math.pi * (1.0 + sol.alpha) * S / (1.0 + S)


def _halfplane_step(K0):
    return HALFPLANE_STEP / math.sqrt(K0)


def _boundary_samples(points):
    return np.column_stack([np.unique(points[:, 0]), np.zeros(len(np.unique(points[:, 0])))])


def halfplane_residual(sol, grid):
    """
    Interior and Neumann defects of V0.

    The interior defect is taken on the grid points with t > 0, the Neumann
    defect |d_nu V0 - 2 h0 e^(V0/2)| at (s, 0) for every abscissa s of the grid.

    Returns:
        tuple: (interior, neumann)
    """
    points = _points(grid)
    step = _halfplane_step(sol.K0)
    inside = points[points[:, 1] > 0]
    interior = 0.0
    if len(inside):
        interior = float(np.max(np.abs(laplacian_fd(sol, inside, step) + sol.weight(inside))))
    edge = _boundary_samples(points)
    normal_derivative = -derivative_fd(sol, edge, step, axis=1)
    neumann = float(np.max(np.abs(normal_derivative - 2.0 * sol.boundary_weight(edge[:, 0]))))
    return interior, neumann


def z0_residual(K0, h0, grid):
    """
    Defects of the linear system solved by Z0.

    Returns:
        tuple: (interior, boundary)

    Raises:
        PreconditionError: when h0 >= 0
    """
    witness = z0(K0, h0)
    sol = witness.solution
    points = _points(grid)
    step = _halfplane_step(K0)
    inside = points[points[:, 1] > 0]
    interior = 0.0
    if len(inside):
        rhs = sol.weight(inside) * (witness(inside) + h0 / K0 + 1.0 / h0)
        interior = float(np.max(np.abs(-laplacian_fd(witness, inside, step) - rhs)))
    edge = _boundary_samples(points)
    normal_derivative = -derivative_fd(witness, edge, step, axis=1)
    boundary = float(np.max(np.abs(normal_derivative - sol.boundary_weight(edge[:, 0]) * witness(edge))))
    return interior, boundary
