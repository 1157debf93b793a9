#!/usr/bin/env python
"""
Pohozaev identity on a ball inside the domain.

For -mu Laplace(u) + c = f e^u with f = 2 C^2 K~ and c = lambda / |S|, on
B = B_r(p):

    int_B (2 f + (x - p).grad f) e^u
        = r oint f e^u - mu r/2 oint (u_tau^2 - u_nu^2) - c (r oint u - 2 int_B u)
"""
import logging
import math

import numpy as np

from elliptic.operators import recovered_gradient, triangle_gradients
from errors import PreconditionError
from functional.energy import masses
from functional.mean_field import normalization_C

logger = logging.getLogger(__name__)

DEFAULT_SUBDIVISIONS = 2
DEFAULT_SAMPLES = 720


def _subtriangle_centroids(levels):
    """Barycentric centroids of the 4^levels triangles of a uniform subdivision."""
    n = 2 ** levels
    points = []
    for i in range(n):
        for j in range(n - i):
            points.append(((3 * i + 1) / (3 * n), (3 * j + 1) / (3 * n)))
            if i + j <= n - 2:
                points.append(((3 * i + 2) / (3 * n), (3 * j + 2) / (3 * n)))
    xy = np.array(points)
    return np.column_stack([1.0 - xy.sum(axis=1), xy])


def _ball_integrals(u, f, grad_f, mesh, p, r, levels):
    """(int_B (2 f + (x-p).grad f) e^u, int_B u) by subdivided centroid quadrature."""
    centroids = mesh.vertices[mesh.triangles].mean(axis=1)
    reach = np.linalg.norm(centroids - p, axis=1) <= r + mesh.max_edge_length()
    triangles = np.flatnonzero(reach)
    bary = _subtriangle_centroids(levels)
    weight = mesh.triangle_areas[triangles] / len(bary)
    corners = mesh.vertices[mesh.triangles[triangles]]
    points = np.einsum("sk,tkd->tsd", bary, corners)
    u_values = np.einsum("sk,tk->ts", bary, u[mesh.triangles[triangles]])
    f_values = np.einsum("sk,tk->ts", bary, f[mesh.triangles[triangles]])
    radial = np.einsum("tsd,td->ts", points - p, grad_f[triangles])
    inside = np.linalg.norm(points - p, axis=2) < r
    integrand = np.where(inside, (2.0 * f_values + radial) * np.exp(u_values), 0.0)
    volume = float((integrand.sum(axis=1) * weight).sum())
    mean_term = float((np.where(inside, u_values, 0.0).sum(axis=1) * weight).sum())
    return volume, mean_term


def pohozaev_residual(u, data, params, mesh, p, r, subdivisions=DEFAULT_SUBDIVISIONS, samples=DEFAULT_SAMPLES):
    """
    Relative defect |LHS - RHS| / |RHS| of the Pohozaev identity on B_r(p).

    Args:
        u: mean-zero field, usually a computed solution
        data (CurvatureData): curvatures
        params (EnergyParams): lambda and mu
        mesh (TriangleMesh): the mesh
        p: ball centre
        r (float): ball radius
        subdivisions (int): levels of triangle subdivision in the volume term
        samples (int): points on the circle

    Raises:
        PreconditionError: when the ball is not inside the domain
    """
    p = np.asarray(p, dtype=float)
    u = mesh.check_field(u, "u")
    if r <= 0:
        raise PreconditionError("pohozaev_residual needs r > 0")
    clearance = float(np.linalg.norm(mesh.vertices[mesh.boundary_vertices] - p, axis=1).min())
    if r >= clearance - mesh.max_edge_length():
        raise PreconditionError(f"ball of radius {r} around {tuple(p)} is not inside the domain")

    A, B = masses(u, data, mesh)
    C = normalization_C(A, B, params.lam, branch=params.branch)
    f = 2.0 * C * C * np.asarray(data.K_tilde)
    c = params.lam / mesh.area
    grad_f = triangle_gradients(mesh, f)
    volume, ball_u = _ball_integrals(u, f, grad_f, mesh, p, r, subdivisions)

    theta = 2.0 * math.pi * np.arange(samples) / samples
    normal = np.column_stack([np.cos(theta), np.sin(theta)])
    tangent = np.column_stack([-np.sin(theta), np.cos(theta)])
    circle = p + r * normal
    u_circle = mesh.interpolate(u, circle)
    f_circle = mesh.interpolate(f, circle)
    grad_circle = mesh.interpolate(recovered_gradient(mesh, u), circle)
    u_nu = np.einsum("sd,sd->s", grad_circle, normal)
    u_tau = np.einsum("sd,sd->s", grad_circle, tangent)
    length = 2.0 * math.pi * r

    def circle_integral(values):
        return float(values.mean() * length)

    rhs = (r * circle_integral(f_circle * np.exp(u_circle))
           - params.mu * 0.5 * r * circle_integral(u_tau ** 2 - u_nu ** 2)
           - c * (r * circle_integral(u_circle) - 2.0 * ball_u))
    residual = abs(volume - rhs) / max(abs(rhs), 1e-300)
    logger.debug("Pohozaev on B(%s, %g): lhs=%.6g rhs=%.6g residual=%.3e", tuple(p), r, volume, rhs, residual)
    return float(residual)
