#!/usr/bin/env python
"""
Concentration of the curvature measure K~ e^u and local masses.
"""
import logging
from dataclasses import dataclass

import numpy as np

from errors import PreconditionError

logger = logging.getLogger(__name__)

CANDIDATES = 512


@dataclass(frozen=True)
class ConcentrationReport:
    """Greedily chosen ball centres and the fraction of the mass they capture."""

    points: tuple
    captured_fraction: float
    radius: float
    eps: float

    @property
    def concentrated(self):
        return self.captured_fraction >= 1.0 - self.eps

    def summary(self):
        return {"points": [list(p) for p in self.points], "captured_fraction": self.captured_fraction,
                "radius": self.radius, "concentrated": self.concentrated}


def _density(u, data, mesh):
    u = mesh.check_field(u, "u")
    return mesh.vertex_areas * data.K_tilde * np.exp(u - u.max())


def _candidates(density):
    n = len(density)
    if n <= CANDIDATES:
        return np.arange(n)
    top = np.argsort(density)[::-1][: CANDIDATES // 2]
    stride = np.arange(0, n, max(1, n // (CANDIDATES // 2)))
    return np.unique(np.concatenate([top, stride]))


def concentration_points(u, data, mesh, k, r, eps=0.1):
    """
    Choose k balls of radius r capturing as much K~ e^u mass as possible.

    Ball centres are mesh vertices; each round takes the ball with the most
    mass not yet captured.

    Returns:
        ConcentrationReport: centres, captured fraction, radius

    Raises:
        PreconditionError: when the total mass is not positive
    """
    if k < 1 or r <= 0:
        raise PreconditionError("concentration_points needs k >= 1 and r > 0")
    density = _density(u, data, mesh)
    total = float(density.sum())
    if not total > 0:
        raise PreconditionError("the curvature measure has non-positive total mass")
    candidates = _candidates(density)
    balls = mesh.vertex_balls(mesh.vertices[candidates], r)
    remaining = density.copy()
    chosen = []
    captured = 0.0
    for _ in range(int(k)):
        gains = np.array([remaining[ball].sum() for ball in balls])
        best = int(np.argmax(gains))
        if gains[best] <= 0.0:
            break
        captured += float(gains[best])
        remaining[balls[best]] = 0.0
        chosen.append(tuple(float(c) for c in mesh.vertices[candidates[best]]))
    fraction = min(max(captured / total, 0.0), 1.0)
    logger.debug("concentration: k=%d r=%g captured %.4f", k, r, fraction)
    return ConcentrationReport(tuple(chosen), fraction, float(r), float(eps))


def local_mass(u, data, mesh, p, r):
    """
    Masses 2 int_{B_r(p)} K~ e^u and 2 int_{B_r(p) on the boundary} h~ e^{u/2}.

    Returns:
        tuple: (interior, boundary)
    """
    if r <= 0:
        raise PreconditionError("local_mass needs r > 0")
    u = mesh.check_field(u, "u")
    inside = mesh.vertices_within(p, r)
    interior = 2.0 * float(np.sum(mesh.vertex_areas[inside] * data.K_tilde[inside] * np.exp(u[inside])))
    boundary_positions = mesh.boundary_index[inside]
    boundary_positions = boundary_positions[boundary_positions >= 0]
    values = data.h_tilde[boundary_positions] * np.exp(0.5 * u[mesh.boundary_vertices[boundary_positions]])
    boundary = 2.0 * float(np.sum(mesh.boundary_lengths[boundary_positions] * values))
    return interior, boundary
