#!/usr/bin/env python
"""
Mesh generators for the planar model surfaces: disc, annulus and a disc with
circular holes.

Points are laid out on concentric rings and triangulated with a Delaunay
triangulation; triangles whose centroid falls inside a hole are removed.
Every ring is twisted by an irrational fraction of its angular step, which
keeps the point set in general position while preserving the rotations by
multiples of 2*pi/count. Marked points can be included exactly and graded
towards with geometric rings.
"""
import logging
import math

import numpy as np
from scipy.spatial import Delaunay, cKDTree

from errors import MeshError, PreconditionError
from geometry.mesh import TriangleMesh

logger = logging.getLogger(__name__)

GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
BASE_RINGS = 4
DEFAULT_GRADING_RINGS = 3
DEFAULT_GRADING_RATIO = 0.5


def _round_up(count, multiple):
    return int(multiple * math.ceil(count / multiple - 1e-9))


def _ring(center, radius, count, twist):
    angles = 2.0 * np.pi * (np.arange(count) + twist) / count
    return np.column_stack([center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)])


class _Domain:
    """Signed distance helpers for a disc of radius R minus circular holes."""

    def __init__(self, radius, holes=(), inner_radius=None):
        self.radius = float(radius)
        self.holes = [(np.asarray(c, dtype=float), float(r)) for c, r in holes]
        if inner_radius is not None:
            self.holes.insert(0, (np.zeros(2), float(inner_radius)))

    def distance_to_boundary(self, points):
        points = np.atleast_2d(points)
        d = self.radius - np.linalg.norm(points, axis=1)
        for center, rho in self.holes:
            d = np.minimum(d, np.linalg.norm(points - center, axis=1) - rho)
        return d

    def boundary_curve(self, point, tol):
        """Return (center, radius) of the circle carrying ``point``, or None."""
        point = np.asarray(point, dtype=float)
        if abs(np.linalg.norm(point) - self.radius) <= tol:
            return np.zeros(2), self.radius
        for center, rho in self.holes:
            if abs(np.linalg.norm(point - center) - rho) <= tol:
                return center, rho
        return None

    def in_hole(self, points):
        inside = np.zeros(len(points), dtype=bool)
        for center, rho in self.holes:
            inside |= np.linalg.norm(points - center, axis=1) < rho
        return inside


class _PointCloud:
    """
    Prioritized point set: marked points first, then generated rings.

    A point closer than ``merge`` to an earlier point is dropped.
    """

    def __init__(self):
        self.marked = []
        self.graded = []
        self.bulk = []

    def add(self, bucket, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(points):
            getattr(self, bucket).append(points)

    def assemble(self, merge):
        groups = [np.concatenate(b) for b in (self.marked, self.graded, self.bulk) if b]
        points = np.concatenate(groups)
        tree = cKDTree(points)
        keep = np.ones(len(points), dtype=bool)
        for i, j in sorted(tree.query_pairs(merge)):
            if keep[i] and keep[j]:
                keep[j] = False
        return points[keep]


def _grading(domain, cloud, point, h, rings, ratio, min_radius, tol):
    """
    Add geometric rings around ``point``; clear bulk points within 0.75 h.
    """
    point = np.asarray(point, dtype=float)
    if min_radius is not None:
        rings = max(rings, int(math.ceil(math.log(min_radius / h) / math.log(ratio))))
    per_ring = _round_up(2.0 * math.pi / (1.0 - ratio), 12)
    curve = domain.boundary_curve(point, tol)
    radius = h
    for i in range(1, rings + 1):
        radius = h * ratio ** i
        ring = _ring(point, radius, per_ring, (i * GOLDEN) % 1.0)
        keep = domain.distance_to_boundary(ring) > 0.3 * radius
        cloud.add("graded", ring[keep])
        if curve is not None:
            center, rho = curve
            base = math.atan2(point[1] - center[1], point[0] - center[0])
            for sign in (-1.0, 1.0):
                theta = base + sign * radius / rho
                cloud.add("graded", center + rho * np.array([math.cos(theta), math.sin(theta)]))
    return radius


def _clear(points, centers, radius):
    if not len(centers):
        return points
    tree = cKDTree(np.atleast_2d(centers))
    distance, _ = tree.query(points)
    return points[distance >= radius]


def _triangulate(points, domain, expected_loops):
    tri = Delaunay(points)
    simplices = tri.simplices
    centroids = points[simplices].mean(axis=1)
    simplices = simplices[~domain.in_hole(centroids)]
    used = np.unique(simplices)
    remap = np.full(len(points), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    mesh = TriangleMesh(points[used], remap[simplices])
    if len(mesh.boundary_loops) != expected_loops:
        raise MeshError(f"generated mesh has {len(mesh.boundary_loops)} boundary loops, "
                        f"expected {expected_loops}; refine or separate the holes")
    return mesh


def _marked_points(include_points, grading_points):
    marked = [tuple(map(float, p)) for p in (include_points or [])]
    for p in grading_points or []:
        p = tuple(map(float, p))
        if p not in marked:
            marked.append(p)
    return marked


def _finish(domain, cloud, bulk_points, boundary_points, marked, grading_points, h,
            grading_rings, grading_ratio, grading_min_radius, expected_loops):
    """Clear bulk points around marked points, grade, merge and triangulate."""
    tol = 1e-9 * domain.radius
    if not 0.0 < grading_ratio < 1.0:
        raise PreconditionError("grading_ratio must lie in (0, 1)")
    for p in marked:
        if domain.distance_to_boundary(np.asarray(p))[0] < -tol:
            raise PreconditionError(f"marked point {p} lies outside the domain")
    graded = [tuple(map(float, p)) for p in grading_points or []]
    plain = [p for p in marked if p not in graded]
    bulk_points = _clear(bulk_points, graded, 0.75 * h)
    bulk_points = _clear(bulk_points, plain, 0.3 * h)
    boundary_points = _clear(boundary_points, graded, 0.75 * h)
    boundary_points = _clear(boundary_points, plain, 0.3 * h)
    cloud.add("marked", np.array(marked) if marked else np.zeros((0, 2)))
    smallest = h
    for p in graded:
        smallest = min(smallest, _grading(domain, cloud, p, h, grading_rings, grading_ratio,
                                          grading_min_radius, tol))
    cloud.add("bulk", boundary_points)
    cloud.add("bulk", bulk_points)
    points = cloud.assemble(merge=1e-3 * smallest)
    mesh = _triangulate(points, domain, expected_loops)
    logger.info("generated mesh: %d vertices, %d triangles, smallest grading radius %.3e",
                mesh.n_vertices, mesh.n_triangles, smallest)
    return mesh


def build_disc_mesh(radius=1.0, refinement=0, include_points=None, grading_points=None,
                    grading_rings=DEFAULT_GRADING_RINGS, grading_ratio=DEFAULT_GRADING_RATIO,
                    grading_min_radius=None, symmetry_order=None):
    """
    Mesh of the disc of the given radius centred at the origin.

    Args:
        radius (float): disc radius
        refinement (int): level; each level halves the ring spacing
        include_points (list): points that must be mesh vertices
        grading_points (list): points to include and grade towards
        grading_rings (int): geometric rings around each grading point
        grading_ratio (float): radius ratio between consecutive grading rings
        grading_min_radius (float): grade at least down to this radius
        symmetry_order (int): make ring counts multiples of this order

    Returns:
        TriangleMesh: mesh with one boundary loop
    """
    if radius <= 0:
        raise PreconditionError("radius must be positive")
    if refinement < 0:
        raise PreconditionError("refinement must be non-negative")
    multiple = math.lcm(6, int(symmetry_order or 1))
    rings = BASE_RINGS * 2 ** int(refinement)
    h = radius / rings
    bulk = [np.zeros((1, 2))]
    for j in range(1, rings):
        count = _round_up(6 * j, multiple)
        bulk.append(_ring((0.0, 0.0), radius * j / rings, count, (j * GOLDEN) % 1.0))
    boundary = _ring((0.0, 0.0), radius, _round_up(6 * rings, multiple), (rings * GOLDEN) % 1.0)
    domain = _Domain(radius)
    marked = _marked_points(include_points, grading_points)
    return _finish(domain, _PointCloud(), np.concatenate(bulk), boundary, marked, grading_points, h,
                   grading_rings, grading_ratio, grading_min_radius, expected_loops=1)


def build_annulus_mesh(r_in, r_out, refinement=0, include_points=None, grading_points=None,
                       grading_rings=DEFAULT_GRADING_RINGS, grading_ratio=DEFAULT_GRADING_RATIO,
                       grading_min_radius=None, symmetry_order=None):
    """
    Mesh of the annulus r_in < |x| < r_out. Loop 0 is the outer circle,
    loop 1 the inner one.
    """
    if not 0 < r_in < r_out:
        raise PreconditionError(f"annulus radii must satisfy 0 < r_in < r_out (got {r_in}, {r_out})")
    if refinement < 0:
        raise PreconditionError("refinement must be non-negative")
    multiple = math.lcm(6, int(symmetry_order or 1))
    layers = BASE_RINGS * 2 ** int(refinement)
    h = (r_out - r_in) / layers
    rings = []
    for j in range(layers + 1):
        r = r_in + (r_out - r_in) * j / layers
        # six points per ring spacing of radius, as on the disc rings
        count = _round_up(max(6.0, 6.0 * r / h), multiple)
        rings.append(_ring((0.0, 0.0), r, count, (j * GOLDEN) % 1.0))
    domain = _Domain(r_out, inner_radius=r_in)
    marked = _marked_points(include_points, grading_points)
    bulk = np.concatenate(rings[1:-1]) if layers > 1 else np.zeros((0, 2))
    boundary = np.concatenate([rings[0], rings[-1]])
    return _finish(domain, _PointCloud(), bulk, boundary, marked, grading_points, h,
                   grading_rings, grading_ratio, grading_min_radius, expected_loops=2)


def build_multihole_mesh(radius, holes, refinement=0, include_points=None, grading_points=None,
                         grading_rings=DEFAULT_GRADING_RINGS, grading_ratio=DEFAULT_GRADING_RATIO,
                         grading_min_radius=None):
    """
    Mesh of a disc with circular holes.

    Args:
        radius (float): outer radius
        holes (list): (center, hole radius) pairs; holes must be disjoint and
            keep two ring spacings away from each other and from the outer circle

    Returns:
        TriangleMesh: loop 0 is the outer circle, then one loop per hole
    """
    if radius <= 0:
        raise PreconditionError("radius must be positive")
    rings = BASE_RINGS * 2 ** int(refinement)
    h = radius / rings
    holes = [(np.asarray(c, dtype=float), float(r)) for c, r in holes]
    for i, (center, rho) in enumerate(holes):
        if rho <= 0 or np.linalg.norm(center) + rho + 2.0 * h > radius:
            raise PreconditionError(f"hole {i} does not fit inside the disc at this refinement")
        for center2, rho2 in holes[i + 1:]:
            if np.linalg.norm(center - center2) < rho + rho2 + 3.0 * h:
                raise PreconditionError("holes overlap or are closer than three ring spacings")
    bulk = [np.zeros((1, 2))]
    for j in range(1, rings):
        bulk.append(_ring((0.0, 0.0), radius * j / rings, 6 * j, (j * GOLDEN) % 1.0))
    bulk = np.concatenate(bulk)
    hole_boundaries = []
    for k, (center, rho) in enumerate(holes):
        bulk = bulk[np.linalg.norm(bulk - center, axis=1) >= rho + 1.5 * h]
        count = _round_up(max(6.0, 2.0 * math.pi * rho / h), 6)
        hole_boundaries.append(_ring(center, rho, count, (k * GOLDEN) % 1.0))
        outer = _round_up(max(6.0, 2.0 * math.pi * (rho + h) / h), 6)
        bulk = np.concatenate([bulk, _ring(center, rho + h, outer, ((k + 1) * GOLDEN) % 1.0)])
    boundary = np.concatenate([_ring((0.0, 0.0), radius, 6 * rings, (rings * GOLDEN) % 1.0)]
                              + hole_boundaries)
    domain = _Domain(radius, holes=holes)
    marked = _marked_points(include_points, grading_points)
    return _finish(domain, _PointCloud(), bulk, boundary, marked, grading_points, h,
                   grading_rings, grading_ratio, grading_min_radius, expected_loops=1 + len(holes))
