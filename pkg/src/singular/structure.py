#!/usr/bin/env python
"""
Conical singularities and corners: the singular Euler characteristic, the
Trudinger constant and the set of quantized blow-up values.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from errors import PreconditionError

logger = logging.getLogger(__name__)

SUBCRITICAL = "subcritical"
CRITICAL = "critical"
SUPERCRITICAL = "supercritical"
NONPOSITIVE = "nonpositive"

CLASSIFY_TOLERANCE = 1e-12
DEFAULT_SNAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SingularStructure:
    """
    Interior conical points (vertex, alpha) and boundary corners (vertex, beta).

    Orders must exceed -1. Use ``validate(mesh)`` to check vertex placement.
    """

    interior: tuple = field(default_factory=tuple)
    corners: tuple = field(default_factory=tuple)

    def __post_init__(self):
        interior = tuple((int(p), float(a)) for p, a in self.interior)
        corners = tuple((int(q), float(b)) for q, b in self.corners)
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "corners", corners)
        for p, alpha in interior:
            if not alpha > -1.0:
                raise PreconditionError(f"conical order alpha={alpha} at vertex {p} violates alpha > -1")
        for q, beta in corners:
            if not beta > -1.0:
                raise PreconditionError(f"corner order beta={beta} at vertex {q} violates beta > -1")
        points = [p for p, _ in interior]
        if len(set(points)) != len(points):
            raise PreconditionError("interior singular vertices must be distinct")
        points = [q for q, _ in corners]
        if len(set(points)) != len(points):
            raise PreconditionError("corner vertices must be distinct")

    @property
    def alphas(self):
        return [a for _, a in self.interior]

    @property
    def betas(self):
        return [b for _, b in self.corners]

    @property
    def points(self):
        return [p for p, _ in self.interior]

    @property
    def corner_points(self):
        return [q for q, _ in self.corners]

    def is_empty(self):
        return not self.interior and not self.corners

    def alpha_at(self, vertex):
        """Order at a vertex: alpha for interior points, beta for corners, else 0."""
        for p, a in self.interior:
            if p == vertex:
                return a
        for q, b in self.corners:
            if q == vertex:
                return b
        return 0.0

    def validate(self, mesh):
        """
        Check that interior points are interior vertices and corners are
        boundary vertices of the mesh.
        """
        flags = mesh.vertex_flags
        for p, _ in self.interior:
            if not 0 <= p < mesh.n_vertices:
                raise PreconditionError(f"singular point {p} is not a mesh vertex")
            if flags[p] != 0:
                raise PreconditionError(f"singular point {p} lies on the boundary; use a corner")
        for q, _ in self.corners:
            if not 0 <= q < mesh.n_vertices:
                raise PreconditionError(f"corner {q} is not a mesh vertex")
            if flags[q] == 0:
                raise PreconditionError(f"corner {q} is not on the boundary")
        return self

    @classmethod
    def from_points(cls, mesh, interior=(), corners=(), tolerance=DEFAULT_SNAP_TOLERANCE):
        """
        Snap (x, y, order) triples to mesh vertices.

        Args:
            mesh (TriangleMesh): the mesh
            interior: (x, y, alpha) triples
            corners: (x, y, beta) triples
            tolerance (float): largest snapping distance relative to the mesh diameter

        Returns:
            SingularStructure: validated against the mesh
        """
        diameter = float(np.ptp(mesh.vertices, axis=0).max())

        def snap(x, y):
            vertex, distance = mesh.nearest_vertex((x, y))
            if distance > tolerance * diameter:
                raise PreconditionError(f"point ({x}, {y}) is not a mesh vertex (nearest at distance {distance:.3e})")
            return vertex

        structure = cls(tuple((snap(x, y), a) for x, y, a in interior),
                        tuple((snap(x, y), b) for x, y, b in corners))
        return structure.validate(mesh)


def singular_chi(mesh, sing):
    """chi(mesh) + sum(alpha) + sum(beta) / 2."""
    return float(mesh.euler_characteristic() + sum(sing.alphas) + 0.5 * sum(sing.betas))


def trudinger_tau(sing):
    """min{1, 2 + 2 min alpha, 1 + min beta}; absent families contribute no term."""
    terms = [1.0]
    if sing.interior:
        terms.append(2.0 + 2.0 * min(sing.alphas))
    if sing.corners:
        terms.append(1.0 + min(sing.betas))
    return float(min(terms))


def classify_surface(chi, tau):
    """
    Label the surface by comparing chi with tau.

    Returns:
        str: 'nonpositive' when chi <= 0, otherwise 'subcritical',
        'critical' or 'supercritical'
    """
    if not 0.0 < tau <= 1.0:
        raise PreconditionError(f"tau={tau} outside (0, 1]")
    if chi <= 0.0:
        return NONPOSITIVE
    if abs(chi - tau) <= CLASSIFY_TOLERANCE * max(1.0, tau):
        return CRITICAL
    return SUBCRITICAL if chi < tau else SUPERCRITICAL


def _subset_sums(weights, cap):
    sums = [0.0]
    for size in range(1, len(weights) + 1):
        grew = False
        for subset in combinations(weights, size):
            total = sum(subset)
            if total <= cap:
                sums.append(total)
                grew = True
        # orders exceed -1, so every weight is positive and larger subsets only grow
        if not grew:
            break
    return sums


def gamma_set(sing, cap):
    """
    Quantized values 4 pi k + 8 pi sum_I (1 + alpha_i) + 4 pi sum_J (1 + beta_j) up to cap.

    Returns:
        list: sorted values, duplicates merged within 1e-12 (1 + cap)
    """
    if not cap > 0:
        raise PreconditionError("gamma_set needs a positive cap")
    weights = [8.0 * math.pi * (1.0 + a) for a in sing.alphas]
    weights += [4.0 * math.pi * (1.0 + b) for b in sing.betas]
    values = []
    for base in _subset_sums(weights, cap):
        k = 0
        while base + 4.0 * math.pi * k <= cap * (1.0 + 1e-15):
            values.append(base + 4.0 * math.pi * k)
            k += 1
    values.sort()
    tolerance = 1e-12 * (1.0 + cap)
    merged = []
    for value in values:
        if not merged or value - merged[-1] > tolerance:
            merged.append(value)
    return merged


def gamma_distance(lam, sing):
    """Distance from lambda to the quantized set."""
    cap = max(float(lam), 0.0) + 4.0 * math.pi
    return float(min(abs(lam - g) for g in gamma_set(sing, cap)))
