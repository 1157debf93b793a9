#!/usr/bin/env python
"""
Mean-field energy J and direct energy I on a triangle mesh.

    J(u) = mu/2 int |grad u|^2 + lambda/|S| int u - F(A(u), B(u))
    I(u) = mu/2 int |grad u|^2 + lambda/|S| int u - 2 A(u) - 4 B(u)

with A(u) = int K~ e^u and B(u) = int_bdry h~ e^{u/2} by lumped quadrature.
J is invariant under adding constants and equals the mean-field energy on
mean-zero fields. Dual gradients are load vectors; Riesz representatives
use the consistent mass matrix.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from elliptic.context import get_context
from elliptic.forms import SymmetricForm
from errors import AdmissibilityError, PreconditionError
from functional.mean_field import PRINCIPAL, f_chi, f_derivatives, f_difference, normalization_C

logger = logging.getLogger(__name__)

MU_WINDOW = 0.1


@dataclass(frozen=True)
class EnergyParams:
    """Mean-field parameter lambda and Dirichlet weight mu."""

    lam: float
    mu: float = 1.0
    branch: str = PRINCIPAL

    def __post_init__(self):
        if abs(self.mu - 1.0) > MU_WINDOW + 1e-12:
            raise PreconditionError(f"mu={self.mu} outside [{1 - MU_WINDOW}, {1 + MU_WINDOW}]")


@dataclass(frozen=True)
class EnergyState:
    """Mean-zero field u with its masses A and B."""

    u: np.ndarray
    A: float
    B: float

    @classmethod
    def from_field(cls, u, data, mesh):
        u = mesh.check_field(u, "u")
        u = u - mesh.mean(u)
        A, B = masses(u, data, mesh)
        return cls(u, A, B)

    def C(self, lam, branch=PRINCIPAL):
        return normalization_C(self.A, self.B, lam, branch=branch)


class _Densities:
    """Per-vertex integrands of the masses, evaluated with an overflow guard."""

    def __init__(self, u, data, mesh):
        u = mesh.check_field(u, "u")
        shift = float(u.max())
        with np.errstate(over="ignore"):
            scale = np.exp(shift)
            scale_half = np.exp(0.5 * shift)
            e_u = np.exp(u - shift)
            e_half = np.exp(0.5 * (u[mesh.boundary_vertices] - shift))
        # a and b are dual vectors: dA = a, dB = b / 2
        self.a = mesh.vertex_areas * data.K_tilde * e_u * scale
        self.b_boundary = mesh.boundary_lengths * data.h_tilde * e_half * scale_half
        self.b = mesh.extend_boundary(self.b_boundary)
        self.A = float(self.a.sum())
        self.B = float(self.b_boundary.sum())
        if not (np.isfinite(self.A) and np.isfinite(self.B)):
            raise AdmissibilityError("masses overflow: the field is too large")


def masses(u, data, mesh):
    """
    A = int K~ e^u and B = int_bdry h~ e^{u/2}.

    Returns:
        tuple: (A, B)
    """
    densities = _Densities(u, data, mesh)
    return densities.A, densities.B


def _linear_term(u, lam, mesh):
    return lam / mesh.area * mesh.integrate(u)


def energy_J(u, data, params, mesh, context=None):
    """
    Mean-field energy of u.

    Raises:
        AdmissibilityError: when (A(u), B(u)) is not admissible
    """
    context = context or get_context(mesh)
    u = mesh.check_field(u, "u")
    A, B = masses(u, data, mesh)
    dirichlet = context.operators.dirichlet(u)
    return 0.5 * params.mu * dirichlet + _linear_term(u, params.lam, mesh) - f_chi(A, B, params.lam, params.branch)


def energy_change_J(u, direction, t, data, params, mesh, context=None):
    """
    J(u + t d) - J(u), accurate to the size of the change itself.

    Mass increments use expm1 and the Dirichlet part is expanded in t, so the
    difference stays resolved after both energies agree to round-off.

    Raises:
        AdmissibilityError: when u + t d is not admissible
    """
    context = context or get_context(mesh)
    u = mesh.check_field(u, "u")
    step = float(t) * mesh.check_field(direction, "direction")
    d = _Densities(u, data, mesh)
    with np.errstate(over="ignore", invalid="ignore"):
        dA = float(np.sum(d.a * np.expm1(step)))
        dB = float(np.sum(d.b_boundary * np.expm1(0.5 * step[mesh.boundary_vertices])))
    if not (np.isfinite(dA) and np.isfinite(dB)):
        raise AdmissibilityError("masses overflow: the step is too large")
    K_step = context.operators.stiffness @ step
    dirichlet = float(u @ K_step) + 0.5 * float(step @ K_step)
    return (params.mu * dirichlet + _linear_term(step, params.lam, mesh)
            - f_difference(d.A, d.B, dA, dB, params.lam, params.branch))


def dual_gradient_J(u, data, params, mesh, context=None):
    """
    Load vector of the derivative of J, projected to zero sum.

    r = mu K u - 2 C^2 (m K~ e^u) - 2 C (l h~ e^{u/2}) + lambda m / |S|
    """
    context = context or get_context(mesh)
    u = mesh.check_field(u, "u")
    d = _Densities(u, data, mesh)
    C = normalization_C(d.A, d.B, params.lam, branch=params.branch)
    weights = mesh.vertex_areas
    r = params.mu * (context.operators.stiffness @ u) - 2.0 * C * C * d.a - 2.0 * C * d.b
    r = r + params.lam / mesh.area * weights
    return context.neumann.project(r)


def gradient_J(u, data, params, mesh, context=None):
    """Mean-zero L2 Riesz representative of the derivative of J."""
    context = context or get_context(mesh)
    g = context.riesz_l2(dual_gradient_J(u, data, params, mesh, context))
    return g - mesh.mean(g)


def hessian_form_J(u, data, params, mesh, context=None):
    """
    Second variation of J at u.

    Returns:
        SymmetricForm: mu K - F_A diag(a) - F_B/4 diag(b) - U W U^T with
        U = [a, b/2] and W the Hessian of F
    """
    context = context or get_context(mesh)
    d = _Densities(u, data, mesh)
    F = f_derivatives(d.A, d.B, params.lam, branch=params.branch)
    sparse = params.mu * context.operators.stiffness - sp.diags(F.F_A * d.a + 0.25 * F.F_B * d.b)
    low_rank = np.column_stack([d.a, 0.5 * d.b])
    weights = -np.array([[F.F_AA, F.F_AB], [F.F_AB, F.F_BB]])
    return SymmetricForm(sparse, low_rank, weights)


def energy_I(u, data, params, mesh, context=None):
    """Direct energy of u; defined for every field."""
    context = context or get_context(mesh)
    u = mesh.check_field(u, "u")
    A, B = masses(u, data, mesh)
    return 0.5 * params.mu * context.operators.dirichlet(u) + _linear_term(u, params.lam, mesh) - 2.0 * A - 4.0 * B


def dual_gradient_I(u, data, params, mesh, context=None):
    """Load vector mu K u + lambda m / |S| - 2 (m K~ e^u) - 2 (l h~ e^{u/2})."""
    context = context or get_context(mesh)
    u = mesh.check_field(u, "u")
    d = _Densities(u, data, mesh)
    return (params.mu * (context.operators.stiffness @ u) + params.lam / mesh.area * mesh.vertex_areas
            - 2.0 * d.a - 2.0 * d.b)


def gradient_I(u, data, params, mesh, context=None):
    """L2 Riesz representative of the derivative of I on the full space."""
    context = context or get_context(mesh)
    return context.riesz_l2(dual_gradient_I(u, data, params, mesh, context))


def hessian_form_I(u, data, params, mesh, context=None):
    """Second variation of I: mu K - 2 diag(a) - diag(b)."""
    context = context or get_context(mesh)
    d = _Densities(u, data, mesh)
    return SymmetricForm(params.mu * context.operators.stiffness - sp.diags(2.0 * d.a + d.b))
