#!/usr/bin/env python
"""
Smallest generalized eigenpairs A x = theta B x of symmetric forms.

Small problems are solved densely; larger ones with LOBPCG, preconditioned
by a sparse factorization. The mean-zero subspace is the B-orthogonal
complement of the constants, which equals the mean-zero fields when B is
the consistent mass matrix.
"""
import logging

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from elliptic.forms import SymmetricForm
from errors import PreconditionError, SolverFailure

logger = logging.getLogger(__name__)

SUBSPACES = ("full", "mean_zero", "symmetric")
DENSE_LIMIT = 2000
RESIDUAL_TOLERANCE = 1e-6


def _as_form(form):
    return form if isinstance(form, SymmetricForm) else SymmetricForm(form)


def _dense(form_a, mass, count, mean_zero):
    a = form_a.to_dense()
    b = mass.toarray()
    b = 0.5 * (b + b.T)
    if mean_zero:
        constraint = b @ np.ones(len(b))
        z = la.null_space(constraint[None, :])
        a = z.T @ a @ z
        b = z.T @ b @ z
    else:
        z = None
    count = min(count, len(a))
    values, vectors = la.eigh(a, b, subset_by_index=[0, count - 1])
    if z is not None:
        vectors = z @ vectors
    return values, vectors


def _sparse(form_a, mass, count, mean_zero, preconditioner, tol, maxiter, seed):
    n = form_a.shape[0]
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal((n, count))
    constraints = np.ones((n, 1)) if mean_zero else None
    lu = spla.splu(sp.csc_matrix(preconditioner))
    precondition = spla.LinearOperator((n, n), matvec=lu.solve, matmat=lu.solve, dtype=float)
    values, vectors = spla.lobpcg(form_a.as_operator(), x0, B=mass, M=precondition, Y=constraints,
                                  tol=tol, maxiter=maxiter, largest=False)
    order = np.argsort(values)
    values, vectors = values[order], vectors[:, order]
    residual = form_a.matvec(vectors) - (mass @ vectors) * values
    scale = np.linalg.norm(form_a.matvec(vectors), axis=0) + np.abs(values) * np.linalg.norm(mass @ vectors, axis=0)
    relative = np.linalg.norm(residual, axis=0) / np.maximum(scale, 1e-300)
    if not np.all(np.isfinite(relative)) or relative.max() > RESIDUAL_TOLERANCE:
        raise SolverFailure(f"LOBPCG did not converge: relative residual {relative.max():.3e}")
    logger.debug("LOBPCG converged: %d pairs, max relative residual %.2e", count, relative.max())
    return values, vectors


def smallest_eigenpairs(form_a, mass, count, subspace="mean_zero", basis=None, dense_limit=DENSE_LIMIT,
                        preconditioner=None, tol=1e-8, maxiter=1000, seed=0):
    """
    The ``count`` smallest eigenpairs of form_a relative to mass.

    Args:
        form_a: SymmetricForm or symmetric sparse matrix
        mass: symmetric positive definite sparse matrix
        count (int): number of pairs
        subspace (str): 'full', 'mean_zero', or 'symmetric' (mean-zero fields in
            the column space of ``basis``)
        basis: sparse (n, r) basis of the symmetric subspace whose columns sum
            to the constant field, e.g. orbit indicators
        dense_limit (int): largest reduced dimension solved densely
        preconditioner: SPD sparse matrix whose inverse preconditions LOBPCG;
            defaults to the sparse part of form_a shifted by mass
        tol (float): LOBPCG residual tolerance
        maxiter (int): LOBPCG iteration cap

    Returns:
        list: (eigenvalue, field) pairs, ascending, fields mass-orthonormal

    Raises:
        SolverFailure: on non-convergence
    """
    if subspace not in SUBSPACES:
        raise PreconditionError(f"unknown subspace '{subspace}'")
    if count < 1:
        raise PreconditionError("count must be at least 1")
    form_a = _as_form(form_a)
    mass = sp.csr_matrix(mass)
    if subspace == "symmetric":
        if basis is None:
            raise PreconditionError("the symmetric subspace needs an orbit basis")
        basis = sp.csr_matrix(basis)
        reduced_a = form_a.reduced(basis)
        reduced_mass = (basis.T @ mass @ basis).tocsr()
        if preconditioner is not None:
            preconditioner = basis.T @ sp.csr_matrix(preconditioner) @ basis
    else:
        reduced_a, reduced_mass = form_a, mass
    mean_zero = subspace != "full"
    dim = reduced_a.shape[0] - (1 if mean_zero else 0)
    count = min(int(count), dim)

    if reduced_a.shape[0] <= dense_limit or 5 * count >= reduced_a.shape[0]:
        values, vectors = _dense(reduced_a, reduced_mass, count, mean_zero)
    else:
        if preconditioner is None:
            diagonal = reduced_a.sparse.diagonal() / reduced_mass.diagonal()
            shift = 1.0 + max(0.0, -float(diagonal.min()))
            preconditioner = reduced_a.sparse + shift * reduced_mass
        values, vectors = _sparse(reduced_a, reduced_mass, count, mean_zero, preconditioner, tol, maxiter, seed)

    if subspace == "symmetric":
        vectors = basis @ vectors
    return [(float(values[i]), np.asarray(vectors[:, i]).copy()) for i in range(len(values))]
