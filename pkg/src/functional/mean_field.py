#!/usr/bin/env python
"""
The normalization constant C(A, B) and the function F(A, B) of the
mean-field energy, in the lambda convention.

C is the positive root of C^2 A + C B = lambda / 2 and
F(A, B) = 2 lambda log(|lambda| / C) + 2 B C, which reduces to -2 B^2 / A
when lambda = 0. On the admissible set F_A = 2 C^2 and F_B = 4 C.
"""
import logging
import math
from typing import NamedTuple

import numpy as np

from errors import AdmissibilityError, PreconditionError

logger = logging.getLogger(__name__)

PRINCIPAL = "principal"
SECONDARY = "secondary"
ADMISSIBLE_MARGIN = 1e-10


class FDerivatives(NamedTuple):
    F_A: float
    F_B: float
    F_AA: float
    F_AB: float
    F_BB: float


def chi_to_lambda(chi):
    """The geometric parameter lambda = 4 pi chi."""
    return 4.0 * math.pi * float(chi)


def admissible(A, B, lam):
    """
    Membership of (A, B) in the admissible set for the sign of lambda.

    lambda > 0: A > -B_+^2 / (2 lambda); lambda = 0: A B < 0;
    lambda < 0: A < B_-^2 / (2 |lambda|). Strict, with a relative margin.
    """
    A, B, lam = float(A), float(B), float(lam)
    if not (math.isfinite(A) and math.isfinite(B)):
        return False
    if lam > 0:
        b_plus = max(B, 0.0)
        return 2.0 * lam * A + b_plus ** 2 > ADMISSIBLE_MARGIN * (2.0 * lam * abs(A) + B ** 2)
    if lam < 0:
        b_minus = max(-B, 0.0)
        return 2.0 * lam * A + b_minus ** 2 > ADMISSIBLE_MARGIN * (2.0 * abs(lam) * abs(A) + B ** 2)
    return A * B < -ADMISSIBLE_MARGIN * 0.5 * (A ** 2 + B ** 2)


def _check(A, B, lam):
    if not admissible(A, B, lam):
        raise AdmissibilityError(f"(A, B) = ({A:.6g}, {B:.6g}) is not admissible for lambda = {lam:.6g}")


def has_secondary_root(A, B, lam):
    """True when C^2 A + C B = lambda / 2 has two positive roots."""
    return (lam > 0 and A < 0 < B) or (lam < 0 and B < 0 < A)


def normalization_C(A, B, lam, branch=PRINCIPAL):
    """
    Positive root C of C^2 A + C B = lambda / 2.

    Args:
        A (float): interior mass
        B (float): boundary mass
        lam (float): mean-field parameter
        branch (str): 'principal' is the closed form continuing the unique
            root; 'secondary' picks the other positive root when there is one

    Returns:
        float: C > 0

    Raises:
        AdmissibilityError: outside the admissible set
    """
    A, B, lam = float(A), float(B), float(lam)
    if branch not in (PRINCIPAL, SECONDARY):
        raise PreconditionError(f"unknown branch '{branch}'")
    _check(A, B, lam)
    if lam == 0.0:
        return -B / A
    S = math.sqrt(max(B * B + 2.0 * lam * A, 0.0))
    if lam > 0:
        C = lam / (S + B) if B >= 0 else (S - B) / (2.0 * A)
    else:
        C = -lam / (S - B) if B <= 0 else (S + B) / (-2.0 * A)
    if branch == SECONDARY:
        if has_secondary_root(A, B, lam):
            return -lam / (2.0 * A * C)
        logger.debug("single positive root at (A, B) = (%g, %g); secondary branch falls back", A, B)
    return C


def f_chi(A, B, lam, branch=PRINCIPAL):
    """F(A, B) for the parameter lambda; see the module docstring."""
    A, B, lam = float(A), float(B), float(lam)
    C = normalization_C(A, B, lam, branch=branch)
    if lam == 0.0:
        return -2.0 * B * B / A
    return 2.0 * lam * math.log(abs(lam) / C) + 2.0 * B * C


def f_difference(A, B, dA, dB, lam, branch=PRINCIPAL):
    """
    F(A + dA, B + dB) - F(A, B) without subtracting the two values.

    The change of C follows from subtracting the two normalization equations,
    (C1 - C)((C1 + C) A1 + B1) = -(C^2 dA + C dB).

    Raises:
        AdmissibilityError: when either point is not admissible
    """
    A, B, dA, dB, lam = float(A), float(B), float(dA), float(dB), float(lam)
    A1, B1 = A + dA, B + dB
    C = normalization_C(A, B, lam, branch=branch)
    C1 = normalization_C(A1, B1, lam, branch=branch)
    if lam == 0.0:
        return -2.0 * (dB * (B1 + B) * A - B * B * dA) / (A * A1)
    denominator = (C1 + C) * A1 + B1
    dC = -(C * C * dA + C * dB) / denominator if denominator != 0.0 else C1 - C
    return -2.0 * lam * math.log1p(dC / C) + 2.0 * (B1 * dC + C * dB)


def f_derivatives(A, B, lam, branch=PRINCIPAL):
    """
    First and second derivatives of F in (A, B).

    Returns:
        FDerivatives: with D = 2 C A + B, F_AA = -4 C^3 / D, F_AB = -4 C^2 / D,
        F_BB = -4 C / D
    """
    C = normalization_C(A, B, lam, branch=branch)
    D = 2.0 * C * float(A) + float(B)
    if D == 0.0:
        raise AdmissibilityError("double root of the normalization equation: F is not twice differentiable")
    return FDerivatives(2.0 * C * C, 4.0 * C, -4.0 * C ** 3 / D, -4.0 * C ** 2 / D, -4.0 * C / D)


def f_bound_constant(eps, lam, grid=None):
    """
    Smallest C_eps with F(-1, t) <= (2 + eps) t_+^2 + C_eps on the grid.

    Args:
        eps (float): slack on the quadratic coefficient
        lam (float): negative mean-field parameter
        grid: values of t (default 4001 points on [-100, 100])

    Returns:
        float: the fitted constant
    """
    if lam >= 0:
        raise PreconditionError("the bound on F(-1, t) concerns lambda < 0")
    grid = np.linspace(-100.0, 100.0, 4001) if grid is None else np.asarray(grid, dtype=float)
    excess = [f_chi(-1.0, t, lam) - (2.0 + eps) * max(t, 0.0) ** 2 for t in grid]
    return float(max(excess))
