#!/usr/bin/env python
"""
Desingularized curvatures and the scale-invariant boundary ratio.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from elliptic.neumann import green_function
from errors import PreconditionError
from singular.structure import SingularStructure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureData:
    """Raw curvatures K, h and their desingularized versions."""

    K_raw: np.ndarray
    h_raw: np.ndarray
    K_tilde: np.ndarray
    h_tilde: np.ndarray
    sing: SingularStructure

    @classmethod
    def regular(cls, K, h):
        """Data without singularities: the tilde fields are the raw ones."""
        K = np.asarray(K, dtype=float)
        h = np.asarray(h, dtype=float)
        return cls(K, h, K, h, SingularStructure())


def singular_weight(sing, mesh, greens=None):
    """
    sum alpha_i G_{p_i} + 1/2 sum beta_j G_{q_j} as a vertex field.

    Args:
        greens (dict): optional precomputed Green functions keyed by pole;
            every pole must be present

    Raises:
        PreconditionError: when a Green function is missing
    """
    weight = np.zeros(mesh.n_vertices)
    poles = [(p, a) for p, a in sing.interior] + [(q, 0.5 * b) for q, b in sing.corners]
    for pole, coefficient in poles:
        if greens is None:
            g = green_function(mesh, pole)
        elif pole in greens:
            g = mesh.check_field(greens[pole], f"Green function of vertex {pole}")
        else:
            raise PreconditionError(f"missing Green function for singular vertex {pole}")
        weight += coefficient * g
    return weight


def desingularize(K, h, sing, mesh, greens=None):
    """
    Absorb the singular sources into the curvatures.

    K~ = K exp(-4 pi W) and h~ = h exp(-2 pi W) with W the singular weight.

    Args:
        K: vertex field
        h: boundary field
        sing (SingularStructure): validated against the mesh
        mesh (TriangleMesh): the mesh
        greens (dict): optional precomputed Green functions keyed by pole

    Returns:
        CurvatureData: raw and desingularized fields
    """
    K = mesh.check_field(K, "K")
    h = mesh.check_boundary_field(h, "h")
    sing.validate(mesh)
    if sing.is_empty():
        return CurvatureData(K, h, K.copy(), h.copy(), sing)
    weight = singular_weight(sing, mesh, greens)
    K_tilde = K * np.exp(-4.0 * math.pi * weight)
    h_tilde = h * np.exp(-2.0 * math.pi * weight[mesh.boundary_vertices])
    logger.debug("desingularized %d interior points and %d corners", len(sing.interior), len(sing.corners))
    return CurvatureData(K, h, K_tilde, h_tilde, sing)


def ratio_D(K, h, mesh):
    """
    h / sqrt|K| at every boundary vertex.

    Raises:
        PreconditionError: when K vanishes at a boundary vertex
    """
    K_boundary = mesh.restrict_to_boundary(K)
    h = mesh.check_boundary_field(h, "h")
    if np.any(K_boundary == 0.0):
        raise PreconditionError("K vanishes at a boundary vertex; the ratio is undefined there")
    return h / np.sqrt(np.abs(K_boundary))


def hchi_nonempty(data, lam):
    """
    Whether the admissible set of the mean-field energy is non-empty.

    For lambda > 0 some K~ or h~ must be positive, for lambda < 0 some must
    be negative, and for lambda = 0 K~ and h~ must take opposite signs
    somewhere.
    """
    K, h = np.asarray(data.K_tilde), np.asarray(data.h_tilde)
    if lam > 0:
        return bool(np.any(K > 0) or np.any(h > 0))
    if lam < 0:
        return bool(np.any(K < 0) or np.any(h < 0))
    return bool((np.any(K > 0) and np.any(h < 0)) or (np.any(K < 0) and np.any(h > 0)))
