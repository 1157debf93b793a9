#!/usr/bin/env python
"""
Morse index of mean-field and direct critical points.
"""
import logging
import math
from typing import NamedTuple

from elliptic.context import get_context
from elliptic.eigen import smallest_eigenpairs
from errors import PreconditionError
from functional.energy import hessian_form_I, hessian_form_J, masses
from functional.mean_field import normalization_C

logger = logging.getLogger(__name__)

MEAN_FIELD = "mean_field"
DIRECT = "direct"
DEFAULT_TOL_EIG = 1e-8
DEFAULT_CAP = 20


class MorseIndex(NamedTuple):
    index: int
    capped: bool
    eigenvalues: tuple

    def __str__(self):
        return f">={self.index}" if self.capped else str(self.index)


def direct_field(u, data, params, mesh):
    """The direct-formulation field u + 2 log C(u) of a mean-field state."""
    A, B = masses(u, data, mesh)
    return u + 2.0 * math.log(normalization_C(A, B, params.lam, branch=params.branch))


def morse_index(u, data, params, mesh, which=MEAN_FIELD, tol_eig=DEFAULT_TOL_EIG, cap=DEFAULT_CAP,
                dense_limit=None, context=None, seed=0):
    """
    Number of negative eigenvalues of the second variation.

    The mean-field Hessian is restricted to mean-zero fields; the direct one
    acts on the full space at u + 2 log C(u).

    Args:
        which (str): 'mean_field' or 'direct'
        tol_eig (float): eigenvalues below -tol_eig * scale count as negative
        cap (int): number of eigenpairs computed

    Returns:
        MorseIndex: index, whether the cap was reached, eigenvalues used
    """
    context = context or get_context(mesh)
    if which == MEAN_FIELD:
        form = hessian_form_J(u, data, params, mesh, context)
        subspace = "mean_zero"
    elif which == DIRECT:
        form = hessian_form_I(direct_field(u, data, params, mesh), data, params, mesh, context)
        subspace = "full"
    else:
        raise PreconditionError(f"unknown Hessian '{which}'")
    options = {} if dense_limit is None else {"dense_limit": dense_limit}
    pairs = smallest_eigenpairs(form, context.operators.mass, cap, subspace=subspace,
                                preconditioner=context.operators.stiffness + context.operators.mass, seed=seed, **options)
    values = tuple(value for value, _ in pairs)
    scale = max(1.0, max(abs(v) for v in values))
    index = sum(1 for v in values if v < -tol_eig * scale)
    capped = index == len(values)
    logger.info("Morse index (%s): %d%s", which, index, " (cap reached)" if capped else "")
    return MorseIndex(index, capped, values)
