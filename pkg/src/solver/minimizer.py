#!/usr/bin/env python
"""
Minimization of the mean-field energy by H1-preconditioned gradient descent.

Each step solves the Neumann problem mu K d = -r for the projected dual
gradient r, so the search direction is the gradient in the Dirichlet inner
product, and a backtracking Armijo search keeps the state admissible. Steps are
accepted on the energy change J(u + t d) - J(u), evaluated directly so that it
stays resolved near a critical point; every accepted step lowers the energy.
The run is declared diverging once the energy falls below its start by the
divergence floor.
"""
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from asymptotics.bubbles import Barycenter, bubble
from elliptic.context import get_context
from errors import AdmissibilityError, PreconditionError
from functional.energy import EnergyState, _Densities, dual_gradient_J, energy_change_J, energy_J, masses
from functional.mean_field import admissible, normalization_C
from solver.symmetry import group_average

logger = logging.getLogger(__name__)

CONVERGED = "converged"
DIVERGING_ENERGY = "diverging_energy"
LEFT_ADMISSIBLE = "left_admissible"
ITERATION_CAP = "iteration_cap"
STATUSES = (CONVERGED, DIVERGING_ENERGY, LEFT_ADMISSIBLE, ITERATION_CAP)

DEFAULT_LAMBDA_MAX = 1e6


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and step control of the minimizer."""

    tol_grad: float = 1e-8
    tol_pde: float = 1e-6
    max_iter: int = 2000
    step0: float = 1.0
    armijo_c: float = 1e-4
    divergence_floor: float = None
    lambda_max: float = DEFAULT_LAMBDA_MAX
    max_halvings: int = 40

    def __post_init__(self):
        if self.tol_grad <= 0 or self.tol_pde <= 0:
            raise PreconditionError("solver tolerances must be positive")
        if self.max_iter < 1:
            raise PreconditionError("max_iter must be at least 1")
        if not 0 < self.armijo_c < 1:
            raise PreconditionError("armijo_c must lie in (0, 1)")
        if self.step0 <= 0:
            raise PreconditionError("step0 must be positive")

    def floor(self, lam, mesh=None):
        """
        Energy drop below the initial energy that signals divergence.

        The configured divergence_floor wins. Otherwise the floor is
        max(|lambda|, 1) log(Lambda_res): Lambda_res is lambda_max, capped on a
        mesh by the finest concentration it resolves, radius / shortest edge.
        """
        if self.divergence_floor is not None:
            return float(self.divergence_floor)
        resolution = self.lambda_max
        if mesh is not None:
            radius = math.sqrt(mesh.area / math.pi)
            resolution = min(resolution, max(radius / float(mesh.edge_lengths.min()), math.e))
        return max(abs(lam), 1.0) * math.log(resolution)


@dataclass
class SolveReport:
    """Outcome of one minimization."""

    state: EnergyState
    gradient_norm: float
    pde_residual_interior: float
    pde_residual_boundary: float
    C_value: float
    energy: float
    iterations: int
    status: str
    lam: float
    mu: float = 1.0
    elapsed: float = 0.0
    energies: list = field(default_factory=list, repr=False)
    energy_changes: list = field(default_factory=list, repr=False)

    @property
    def converged(self):
        return self.status == CONVERGED

    @property
    def max_u(self):
        return float(np.max(self.state.u))

    def summary(self):
        return {
            "status": self.status,
            "lambda": self.lam,
            "mu": self.mu,
            "energy": self.energy,
            "gradient_norm": self.gradient_norm,
            "pde_residual_interior": self.pde_residual_interior,
            "pde_residual_boundary": self.pde_residual_boundary,
            "C": self.C_value,
            "A": self.state.A,
            "B": self.state.B,
            "max_u": self.max_u,
            "iterations": self.iterations,
            "elapsed": self.elapsed,
        }


def pde_residual(state, data, params, mesh, context=None):
    """
    Dual norms of the weak-form defect of the interior equation and of the
    Neumann condition.

    The interior defect is tested against fields vanishing on the boundary and
    normalized by 1 + the norm of the source 2 C^2 K~ e^u - lambda/|S|; the
    boundary defect is the L2 norm of the boundary rows normalized by 1 + the
    norm of the boundary source 2 C h~ e^{u/2}.

    Returns:
        tuple: (interior, boundary)
    """
    context = context or get_context(mesh)
    u = state.u if isinstance(state, EnergyState) else mesh.check_field(state, "u")
    d = _Densities(u, data, mesh)
    C = normalization_C(d.A, d.B, params.lam, branch=params.branch)
    source = 2.0 * C * C * d.a - params.lam / mesh.area * mesh.vertex_areas
    boundary_source = 2.0 * C * d.b
    defect = params.mu * (context.operators.stiffness @ u) - source - boundary_source
    interior = context.interior_dual_norm(defect) / (1.0 + context.interior_dual_norm(source))
    boundary_rows = defect[mesh.boundary_vertices]
    boundary = (context.boundary_dual_norm(boundary_rows)
                / (1.0 + context.boundary_dual_norm(boundary_source[mesh.boundary_vertices])))
    return float(interior), float(boundary)


def seed_state(kind, mesh, point=None, Lambda=1e2, height=1.0, width=None):
    """
    Initial field for the minimizer.

    Args:
        kind (str): 'zero', 'bubble' (at ``point`` with concentration
            ``Lambda``) or 'boundary_layer' (``height`` at the boundary
            decaying linearly over ``width``)

    Returns:
        numpy.ndarray: mean-zero field
    """
    if kind == "zero":
        return np.zeros(mesh.n_vertices)
    if kind == "bubble":
        if point is None:
            raise PreconditionError("a bubble seed needs a point")
        return bubble(Barycenter.single(point), Lambda, mesh)
    if kind == "boundary_layer":
        width = width or 4.0 * mesh.max_edge_length()
        distance, _ = cKDTree(mesh.vertices[mesh.boundary_vertices]).query(mesh.vertices)
        u = height * np.clip(1.0 - distance / width, 0.0, None)
        return u - mesh.mean(u)
    raise PreconditionError(f"unknown seed kind '{kind}'")


class _Problem:
    """Energy and gradient evaluation shared by the iterations of one solve."""

    def __init__(self, data, params, mesh, group, context):
        self.data = data
        self.params = params
        self.mesh = mesh
        self.group = group
        self.context = context

    def admissible(self, u):
        try:
            A, B = masses(u, self.data, self.mesh)
        except AdmissibilityError:
            return False
        return admissible(A, B, self.params.lam)

    def energy(self, u):
        return energy_J(u, self.data, self.params, self.mesh, self.context)

    def energy_change(self, u, direction, t):
        return energy_change_J(u, direction, t, self.data, self.params, self.mesh, self.context)

    def gradient(self, u):
        """Projected dual gradient r and the H1 direction z = K^+ r."""
        r = dual_gradient_J(u, self.data, self.params, self.mesh, self.context)
        z = self.context.neumann.solve(r)
        if self.group is not None:
            z = group_average(z, self.group)
        return r, z


def _report(problem, u, gnorm, energy, iterations, status, started, energies, changes):
    mesh, data, params = problem.mesh, problem.data, problem.params
    state = EnergyState.from_field(u, data, mesh)
    if admissible(state.A, state.B, params.lam):
        C = normalization_C(state.A, state.B, params.lam, branch=params.branch)
        interior, boundary = pde_residual(state, data, params, mesh, problem.context)
    else:
        C, interior, boundary = float("nan"), float("nan"), float("nan")
    report = SolveReport(state, float(gnorm), interior, boundary, C, float(energy), iterations, status,
                         params.lam, params.mu, time.perf_counter() - started, energies, changes)
    logger.info("minimize lambda=%.6g mu=%.4g: %s after %d iterations (J=%.10g, |g|=%.3e)",
                params.lam, params.mu, status, iterations, energy, gnorm)
    return report


def minimize(data, params, mesh, group=None, options=None, initial=None, context=None):
    """
    Minimize the mean-field energy over mean-zero fields.

    Args:
        data (CurvatureData): curvatures
        params (EnergyParams): lambda and mu
        mesh (TriangleMesh): the mesh
        group (SymmetryGroup): restrict to group-invariant fields
        options (SolverOptions): tolerances and step control
        initial: starting field (default zero)

    Returns:
        SolveReport: final state and status

    Raises:
        PreconditionError: when the starting field is not admissible
    """
    started = time.perf_counter()
    options = options or SolverOptions()
    context = context or get_context(mesh)
    problem = _Problem(data, params, mesh, group, context)

    u = np.zeros(mesh.n_vertices) if initial is None else mesh.check_field(initial, "initial field").copy()
    if group is not None:
        u = group_average(u, group)
    u = u - mesh.mean(u)
    if not problem.admissible(u):
        raise PreconditionError("the starting field is not admissible; configure a seed "
                                "(seed_kind = bubble or boundary_layer)")

    energy = problem.energy(u)
    energy0 = energy
    floor = options.floor(params.lam, mesh)
    r, z = problem.gradient(u)
    gnorm = math.sqrt(max(float(r @ z), 0.0))
    energies = [energy]
    changes = []
    step = options.step0

    for iteration in range(options.max_iter):
        if gnorm < options.tol_grad:
            interior, boundary = pde_residual(u, data, params, mesh, context)
            if max(interior, boundary) < options.tol_pde:
                return _report(problem, u, gnorm, energy, iteration, CONVERGED, started, energies, changes)

        direction = -z / params.mu
        slope = float(r @ direction)
        t = min(2.0 * step, options.step0)
        halvings = 0
        change = None
        left_admissible = False
        while halvings <= options.max_halvings:
            try:
                change = problem.energy_change(u, direction, t)
            except AdmissibilityError:
                change, left_admissible = None, True
            else:
                left_admissible = False
                # strict decrease on top of the Armijo condition
                if change < 0.0 and change <= options.armijo_c * t * slope:
                    break
                change = None
            t *= 0.5
            halvings += 1

        if change is None:
            if left_admissible:
                return _report(problem, u, gnorm, energy, iteration, LEFT_ADMISSIBLE, started, energies, changes)
            logger.warning("line search stalled at |g|=%.3e after %d iterations", gnorm, iteration)
            return _report(problem, u, gnorm, energy, iteration, ITERATION_CAP, started, energies, changes)

        step = t
        trial = u + t * direction
        u = trial - mesh.mean(trial)
        if group is not None:
            u = group_average(u, group)
        energy = energy + change
        energies.append(energy)
        changes.append(change)
        r, z = problem.gradient(u)
        gnorm = math.sqrt(max(float(r @ z), 0.0))
        logger.debug("iteration %d: J=%.12g dJ=%.3e |g|=%.3e t=%.3e", iteration, energy, change, gnorm, t)

        if energy < energy0 - floor:
            logger.info("energy fell %.6g below its start (floor %.6g)", energy0 - energy, floor)
            return _report(problem, u, gnorm, energy, iteration + 1, DIVERGING_ENERGY, started, energies, changes)

    if gnorm < options.tol_grad:
        interior, boundary = pde_residual(u, data, params, mesh, context)
        if max(interior, boundary) < options.tol_pde:
            return _report(problem, u, gnorm, energy, options.max_iter, CONVERGED, started, energies, changes)
    return _report(problem, u, gnorm, energy, options.max_iter, ITERATION_CAP, started, energies, changes)
