#!/usr/bin/env python
"""
Bubble test functions centred at weighted point sets, and the slopes of
their energies against log(Lambda).
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from elliptic.context import get_context
from errors import PreconditionError
from functional.energy import EnergyParams, energy_J, masses

logger = logging.getLogger(__name__)

RESOLUTION_FACTOR = 0.2
WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Barycenter:
    """Atoms (t_i, x_i) with t_i >= 0 summing to one."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), (float(x[0]), float(x[1]))) for t, x in self.atoms)
        if not atoms:
            raise PreconditionError("empty barycenter")
        weights = np.array([t for t, _ in atoms])
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise PreconditionError("barycenter weights must be non-negative and sum to one")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def single(cls, point):
        return cls(((1.0, point),))

    @property
    def weights(self):
        return np.array([t for t, _ in self.atoms])

    @property
    def points(self):
        return np.array([x for _, x in self.atoms])

    def __len__(self):
        return len(self.atoms)


def boundary_barycenter(mesh, loop=0, points=1, weights=None):
    """
    Barycenter whose atoms are boundary vertices of one loop.

    Args:
        mesh (TriangleMesh): the mesh
        loop (int): boundary loop index
        points: number of evenly spaced atoms, or points snapped to the loop
        weights: atom weights (uniform by default)
    """
    if not 0 <= loop < len(mesh.boundary_loops):
        raise PreconditionError(f"loop index {loop} out of range")
    vertices = mesh.boundary_loops[loop]
    if isinstance(points, int):
        if points < 1:
            raise PreconditionError("empty barycenter")
        chosen = [vertices[(i * len(vertices)) // points] for i in range(points)]
    else:
        coords = mesh.vertices[vertices]
        chosen = [vertices[int(np.argmin(np.linalg.norm(coords - np.asarray(p, dtype=float), axis=1)))]
                  for p in points]
    if weights is None:
        weights = [1.0 / len(chosen)] * len(chosen)
    return Barycenter(tuple((t, tuple(mesh.vertices[v])) for t, v in zip(weights, chosen)))


def raw_bubble(sigma, Lambda, points, alpha=0.0):
    """
    log sum_i t_i b / (1 + b d(x, x_i)^{2(1+alpha)})^2 with b = Lambda^{2(1+alpha)}.

    Evaluated in log space so large Lambda does not overflow.
    """
    if Lambda < 1:
        raise PreconditionError(f"Lambda={Lambda} must be at least 1")
    points = np.atleast_2d(points)
    exponent = 2.0 * (1.0 + alpha)
    log_b = exponent * math.log(Lambda)
    distance = np.linalg.norm(points[:, None, :] - sigma.points[None, :, :], axis=2)
    with np.errstate(divide="ignore"):
        log_t = np.log(sigma.weights)
        log_d = np.log(distance)
    log_bd = np.logaddexp(0.0, log_b + exponent * log_d)
    terms = log_t[None, :] + log_b - 2.0 * log_bd
    return logsumexp(terms, axis=1)


def bubble(sigma, Lambda, mesh, alpha=0.0):
    """
    Mean-zero bubble field on the mesh.

    Args:
        sigma (Barycenter): atoms
        Lambda (float): concentration parameter, at least 1
        mesh (TriangleMesh): the mesh
        alpha (float): conical order the profile is adapted to

    Returns:
        numpy.ndarray: the bubble minus its mean
    """
    phi = raw_bubble(sigma, Lambda, mesh.vertices, alpha=alpha)
    return phi - mesh.mean(phi)


class BubbleSlopes(NamedTuple):
    dirichlet_slope: float
    interior_mass_slope: float
    boundary_mass_slope: float
    used: tuple
    excluded: tuple


def atom_resolution(sigma, mesh):
    """Largest edge length at the vertices nearest to the atoms."""
    lengths = []
    for point in sigma.points:
        vertex, _ = mesh.nearest_vertex(point)
        lengths.append(float(mesh.incident_edge_lengths(vertex).max()))
    return max(lengths)


def resolved_lambdas(sigma, lambdas, mesh):
    """Split lambdas into those the mesh resolves (edge < 0.2 / Lambda) and the rest."""
    h = atom_resolution(sigma, mesh)
    used = tuple(float(L) for L in lambdas if h < RESOLUTION_FACTOR / L)
    excluded = tuple(float(L) for L in lambdas if h >= RESOLUTION_FACTOR / L)
    if excluded:
        logger.warning("mesh too coarse for Lambda in %s (edge length %.3e near the atoms); excluded",
                       list(excluded), h)
    return used, excluded


def bubble_slopes(sigma, lambdas, data, mesh, alpha=0.0, context=None):
    """
    Least-squares slopes against log(Lambda) of 1/2 int |grad phi|^2,
    log int K~ e^phi and log |int_bdry h~ e^{phi/2}| for the mean-zero bubbles.

    Raises:
        PreconditionError: when fewer than three Lambda values are resolved
    """
    if len(lambdas) < 3:
        raise PreconditionError("bubble_slopes needs at least three Lambda values")
    context = context or get_context(mesh)
    used, excluded = resolved_lambdas(sigma, lambdas, mesh)
    if len(used) < 3:
        raise PreconditionError(f"mesh too coarse for Lambda_max={max(lambdas):g}: "
                                f"only {len(used)} values resolved")
    logs, dirichlet, interior, boundary = [], [], [], []
    for Lambda in used:
        phi = bubble(sigma, Lambda, mesh, alpha=alpha)
        A, B = masses(phi, data, mesh)
        logs.append(math.log(Lambda))
        dirichlet.append(0.5 * context.operators.dirichlet(phi))
        interior.append(math.log(A))
        boundary.append(math.log(abs(B)) if B != 0 else float("nan"))
        logger.debug("Lambda=%g: dirichlet=%.6g A=%.6g B=%.6g", Lambda, dirichlet[-1], A, B)

    def slope(values):
        if not np.all(np.isfinite(values)):
            return float("nan")
        return float(np.polyfit(logs, values, 1)[0])

    return BubbleSlopes(slope(dirichlet), slope(interior), slope(boundary), used, excluded)


def test_function_energy(sigma, Lambda, lam, data, mesh, mu=1.0, alpha=0.0, context=None):
    """Mean-field energy at the mean-zero bubble."""
    phi = bubble(sigma, Lambda, mesh, alpha=alpha)
    return energy_J(phi, data, EnergyParams(lam, mu), mesh, context)


def energy_slope(sigma, lambdas, lam, data, mesh, alpha=0.0, context=None):
    """Least-squares slope of the test-function energy against log(Lambda)."""
    used, _ = resolved_lambdas(sigma, lambdas, mesh)
    if len(used) < 2:
        raise PreconditionError("energy_slope needs two resolved Lambda values")
    energies = [test_function_energy(sigma, L, lam, data, mesh, alpha=alpha, context=context) for L in used]
    return float(np.polyfit(np.log(used), energies, 1)[0])


# keep pytest from collecting it when imported into test modules
test_function_energy.__test__ = False
