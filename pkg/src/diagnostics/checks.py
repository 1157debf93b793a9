#!/usr/bin/env python
"""
Scenario-level checks: Gauss-Bonnet defect, existence hypotheses and the
structured scenario report.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from errors import PreconditionError
from functional.energy import EnergyState, masses
from functional.mean_field import PRINCIPAL, admissible, normalization_C
from singular.curvature import hchi_nonempty
from singular.structure import (CRITICAL, SUBCRITICAL, SUPERCRITICAL, classify_surface, gamma_distance,
                                singular_chi, trudinger_tau)

logger = logging.getLogger(__name__)

MARGIN = 1e-10
FAILED = "failed"

CHI_POSITIVE_SUBCRITICAL = "chi>0:subcritical"
CHI_POSITIVE_CRITICAL = "chi>0:critical_symmetric"
CHI_POSITIVE_SUPERCRITICAL = "chi>0:supercritical_symmetric"
CHI_ZERO_FIRST = "chi=0:first"
CHI_ZERO_SECOND = "chi=0:second"
CHI_ZERO_THIRD = "chi=0:third"
CHI_NEGATIVE = "chi<0"
MINMAX = "minmax"
LAMBDA_FAMILY = "lambda_family"
HCHI_EMPTY = "H_chi empty"


def gauss_bonnet_residual(state, data, mesh, chi, branch=PRINCIPAL, rescale=True):
    """
    |int K~ e^w + oint h~ e^(w/2) - 2 pi chi| / (1 + 2 pi |chi|).

    With ``rescale`` the metric is w = u + 2 log C(u) at lambda = 4 pi chi,
    which turns a mean-field solution back into a solution of the geometric
    problem; without it w = u.

    Raises:
        PreconditionError: when rescaling an inadmissible state
    """
    if isinstance(state, EnergyState):
        A, B = state.A, state.B
    else:
        A, B = masses(state, data, mesh)
    if rescale:
        lam = 4.0 * math.pi * chi
        if not admissible(A, B, lam):
            raise PreconditionError("the state is not admissible; C(u) is undefined")
        C = normalization_C(A, B, lam, branch=branch)
        # e^(2 log C) is C^2 in the interior and C on the boundary
        A, B = C * C * A, C * B
    return float(abs(A + B - 2.0 * math.pi * chi) / (1.0 + 2.0 * math.pi * abs(chi)))


@dataclass
class HypothesisReport:
    """Labels of the existence results whose hypotheses hold, with notes."""

    satisfied: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    marginal: list = field(default_factory=list)

    def __contains__(self, label):
        return label in self.satisfied

    def __iter__(self):
        return iter(self.satisfied)

    def __len__(self):
        return len(self.satisfied)


class _Hypotheses:
    """Checkable conditions of the existence results on one scenario."""

    def __init__(self, data, mesh, report, group=None):
        self.K = np.asarray(data.K_raw, dtype=float)
        self.h = np.asarray(data.h_raw, dtype=float)
        self.sing = data.sing
        self.mesh = mesh
        self.report = report
        self.group = group

    def below(self, value, bound, label):
        """value < bound; values within the margin are reported as marginal."""
        if abs(value - bound) <= MARGIN:
            self.report.marginal.append(f"{label} ({value:.12g} vs {bound:.12g})")
            return False
        return value < bound

    def K_nonnegative(self):
        return bool(np.all(self.K >= -MARGIN) and np.any(self.K > MARGIN))

    def K_nonpositive(self):
        return bool(np.all(self.K <= MARGIN) and np.any(self.K < -MARGIN))

    def K_positive(self):
        return bool(np.all(self.K > MARGIN))

    def ratio_below_one(self, label):
        K_boundary = self.mesh.restrict_to_boundary(self.K)
        if np.any(np.abs(K_boundary) <= MARGIN):
            self.report.notes.append(f"{label}: K vanishes on the boundary")
            return False
        ratio = self.h / np.sqrt(np.abs(K_boundary))
        return self.below(float(ratio.max()), 1.0, f"{label}: max D")

    def multiply_connected_with_free_loop(self):
        loops = self.mesh.boundary_loops
        if len(loops) < 2:
            return False
        corners = {v for v, _ in self.sing.corners}
        return any(not corners & set(loop.tolist()) for loop in loops)

    def orders_admit_minmax(self):
        return all(a >= -0.5 for a in self.sing.alphas) and all(b >= 0.0 for b in self.sing.betas)

    def symmetric(self):
        """Whether the configured group acts without boundary fixed points and preserves K and h."""
        if self.group is None:
            return False
        action = self.group.action
        scale_K = 1.0 + np.max(np.abs(self.K))
        if np.max(np.abs(self.K[action] - self.K)) > MARGIN * scale_K:
            self.report.notes.append("K is not invariant under the symmetry group")
            return False
        h_full = self.mesh.extend_boundary(self.h)
        if np.max(np.abs(h_full[action] - h_full)) > MARGIN * (1.0 + np.max(np.abs(self.h), initial=0.0)):
            self.report.notes.append("h is not invariant under the symmetry group")
            return False
        return True

    def fixed_singular_alphas(self):
        fixed = {v for orbit in self.group.orbits if len(orbit) == 1 for v in orbit}
        return [a for v, a in self.sing.interior if v in fixed]

    def orbit_size(self):
        """k = min #Gx over points that are not fixed."""
        sizes = [len(orbit) for orbit in self.group.orbits if len(orbit) > 1]
        return min(sizes) if sizes else self.group.order

    def has_fixed_points(self):
        return any(len(orbit) == 1 for orbit in self.group.orbits)


def classify_hypotheses(data, mesh, chi=None, lam=None, group=None):
    """
    Evaluate the checkable hypotheses of the existence results.

    Args:
        data (CurvatureData): curvatures and singularities
        mesh (TriangleMesh): the surface
        chi (float): singular Euler characteristic (computed when omitted)
        lam (float): parameter of the lambda-family result (default 4 pi chi)
        group (SymmetryGroup): symmetry available to the critical and
            supercritical results

    Returns:
        HypothesisReport: satisfied labels, notes and marginal conditions
    """
    if chi is None:
        chi = singular_chi(mesh, data.sing)
    tau = trudinger_tau(data.sing)
    lam = 4.0 * math.pi * chi if lam is None else float(lam)
    report = HypothesisReport()
    checks = _Hypotheses(data, mesh, report, group)

    if not hchi_nonempty(data, 4.0 * math.pi * chi):
        report.notes.append(HCHI_EMPTY)

    if chi > MARGIN:
        label = classify_surface(chi, tau)
        if checks.K_nonnegative():
            if label == SUBCRITICAL:
                report.satisfied.append(CHI_POSITIVE_SUBCRITICAL)
            elif checks.symmetric():
                fixed_alphas = checks.fixed_singular_alphas()
                k = checks.orbit_size()
                if label == CRITICAL:
                    if not fixed_alphas or checks.below(tau, 2.0 + 2.0 * min(fixed_alphas), "critical: tau"):
                        report.satisfied.append(CHI_POSITIVE_CRITICAL)
                elif label == SUPERCRITICAL:
                    if not checks.has_fixed_points():
                        bound = k * tau
                    else:
                        bound = min([2.0, k * tau] + [2.0 + 2.0 * a for a in fixed_alphas])
                    if checks.below(chi, bound, "supercritical: chi"):
                        report.satisfied.append(CHI_POSITIVE_SUPERCRITICAL)
            else:
                report.notes.append(f"{label} surface without a symmetry group")
        else:
            report.notes.append("K changes sign or vanishes: no result for chi > 0 applies")
    elif abs(chi) <= MARGIN:
        boundary_integral = mesh.boundary_integrate(checks.h)
        if np.any(checks.K > MARGIN) and np.all(checks.h <= MARGIN) and np.any(checks.h < -MARGIN):
            report.satisfied.append(CHI_ZERO_FIRST)
        if checks.K_nonnegative() and checks.below(boundary_integral, 0.0, "second: int h"):
            report.satisfied.append(CHI_ZERO_SECOND)
        if (checks.K_nonpositive() and np.all(checks.h >= -MARGIN) and np.any(checks.h > MARGIN)
                and checks.ratio_below_one(CHI_ZERO_THIRD)):
            report.satisfied.append(CHI_ZERO_THIRD)
    else:
        if np.any(checks.K >= -MARGIN):
            report.notes.append("chi < 0 needs K < 0 everywhere (log|K| integrable)")
        elif checks.ratio_below_one(CHI_NEGATIVE):
            report.satisfied.append(CHI_NEGATIVE)

    if checks.K_positive() and checks.orders_admit_minmax() and checks.multiply_connected_with_free_loop():
        if classify_surface(chi, tau) == SUPERCRITICAL and gamma_distance(4.0 * math.pi * chi, data.sing) > MARGIN:
            report.satisfied.append(MINMAX)
        if lam > 0 and gamma_distance(lam, data.sing) > MARGIN:
            report.satisfied.append(LAMBDA_FAMILY)

    logger.info("hypotheses (chi=%.6g): %s", chi, ", ".join(report.satisfied) or "none")
    return report


def _clean(value):
    """Replace non-finite numbers by the failure marker, recursively."""
    if isinstance(value, dict):
        return {key: _clean(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return FAILED
    return value


@dataclass
class ScenarioReport:
    """Everything certified about one scenario."""

    chi: float
    tau: float
    classification: str
    lam: float = None
    gamma_distance: float = None
    gauss_bonnet_residual: float = None
    solve: dict = None
    concentration: dict = None
    morse_mean_field: object = None
    morse_direct: object = None
    hypotheses: HypothesisReport = None
    timing: dict = field(default_factory=dict)

    def to_dict(self):
        """Plain dictionary with every non-finite number marked as failed."""
        hypotheses = self.hypotheses or HypothesisReport()
        return _clean({
            "chi": self.chi,
            "tau": self.tau,
            "classification": self.classification,
            "lambda": self.lam,
            "gamma_distance": self.gamma_distance,
            "gauss_bonnet_residual": self.gauss_bonnet_residual,
            "solve": self.solve,
            "concentration": self.concentration,
            "morse_index": {
                "mean_field": None if self.morse_mean_field is None else str(self.morse_mean_field),
                "direct": None if self.morse_direct is None else str(self.morse_direct),
            },
            "hypotheses": {"satisfied": list(hypotheses.satisfied), "notes": list(hypotheses.notes),
                           "marginal": list(hypotheses.marginal)},
            "timing": self.timing,
        })
