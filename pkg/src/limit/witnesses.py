#!/usr/bin/env python
"""
Quadratic forms of the linearized limit problems and Morse-instability witnesses.

    Q_v[phi] = int (|grad phi|^2 - 2 K0 |x|^(2 alpha) e^v phi^2)
               - int_{t=0} h0 e^(v/2) phi^2        (half-plane only)

A witness is a compactly supported test field with Q_v[phi] < 0.
"""
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import roots_legendre

from errors import PreconditionError
from limit.solutions import HALFPLANE, PLANE, LinearizedWitness, log_panels

logger = logging.getLogger(__name__)

LOG_CAP_R = "log_cap_R"
ANNULUS_M = "annulus_M"
BOUNDARY_HZ = "boundary_hz"
WITNESS_KINDS = (LOG_CAP_R, ANNULUS_M, BOUNDARY_HZ)

WINDOW_FACTOR = 4.0
SEARCH_CAP = 1e6
ANGULAR_PANELS = 16
ANGULAR_NODES = 16
NEGLIGIBLE_WEIGHT = 1e-14


def smoothstep(s):
    """eta(s) = 3 s^2 - 2 s^3 on [0, 1], clamped to 0 below and 1 above."""
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


def smoothstep_derivative(s):
    inside = (s > 0.0) & (s < 1.0)
    return np.where(inside, 6.0 * s * (1.0 - s), 0.0)


def _radial_parts(points):
    r = np.linalg.norm(points, axis=1)
    safe = np.where(r > 0, r, 1.0)
    return r, points / safe[:, None]


@dataclass(frozen=True)
class LogCap:
    """phi_R(x) = eta(1 - log|x| / log R): one on B_1, zero outside B_R."""

    R: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.R > 1:
            raise PreconditionError("the log cap needs R > 1")

    @property
    def support(self):
        return self.R

    @property
    def breakpoints(self):
        return (1.0, self.R)

    def _argument(self, r):
        with np.errstate(divide="ignore"):
            return 1.0 - np.log(np.where(r > 0, r, 1e-300)) / math.log(self.R)

    def __call__(self, points):
        r, _ = _radial_parts(np.asarray(points, dtype=float))
        return self.amplitude * smoothstep(self._argument(r))

    def gradient(self, points):
        r, unit = _radial_parts(np.asarray(points, dtype=float))
        slope = smoothstep_derivative(self._argument(r))
        radial = np.where(r > 0, -slope / (np.where(r > 0, r, 1.0) * math.log(self.R)), 0.0)
        return self.amplitude * radial[:, None] * unit

    def scaled(self, factor):
        return replace(self, amplitude=self.amplitude * factor)


@dataclass(frozen=True)
class AnnulusCutoff:
    """
    psi_{M,M0}: zero on B_M0 and outside B_2M, one on M0 <= 2 M0 <= |x| <= M,
    with log-scale smoothstep transitions of bounded Dirichlet energy.
    """

    M0: float
    M: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.M0 > 0:
            raise PreconditionError("M0 must be positive")
        if not self.M > 2.0 * self.M0:
            raise PreconditionError("the annulus cutoff needs M > 2 M0")

    @property
    def support(self):
        return 2.0 * self.M

    @property
    def breakpoints(self):
        return (self.M0, 2.0 * self.M0, self.M, 2.0 * self.M)

    def _arguments(self, r):
        logr = np.log(np.where(r > 0, r, 1e-300))
        inner = (logr - math.log(self.M0)) / math.log(2.0)
        outer = (math.log(2.0 * self.M) - logr) / math.log(2.0)
        return inner, outer

    def __call__(self, points):
        r, _ = _radial_parts(np.asarray(points, dtype=float))
        inner, outer = self._arguments(r)
        return self.amplitude * smoothstep(inner) * smoothstep(outer)

    def gradient(self, points):
        r, unit = _radial_parts(np.asarray(points, dtype=float))
        inner, outer = self._arguments(r)
        scale = 1.0 / (np.where(r > 0, r, 1.0) * math.log(2.0))
        radial = (smoothstep_derivative(inner) * smoothstep(outer)
                  - smoothstep(inner) * smoothstep_derivative(outer)) * scale
        return self.amplitude * radial[:, None] * unit

    def scaled(self, factor):
        return replace(self, amplitude=self.amplitude * factor)


@dataclass(frozen=True)
class BoundaryHZ:
    """Product of the log cap phi_R with the linearized witness Z0 (h0 < 0)."""

    R: float
    K0: float
    h0: float
    amplitude: float = 1.0

    @property
    def cap(self):
        return LogCap(self.R)

    @property
    def z(self):
        return LinearizedWitness(self.K0, self.h0)

    @property
    def support(self):
        return self.R

    @property
    def breakpoints(self):
        return self.cap.breakpoints

    def __call__(self, points):
        return self.amplitude * self.cap(points) * self.z(points)

    def gradient(self, points):
        cap, z = self.cap, self.z
        return self.amplitude * (cap.gradient(points) * z(points)[:, None] + cap(points)[:, None] * z.gradient(points))

    def scaled(self, factor):
        return replace(self, amplitude=self.amplitude * factor)


@dataclass(frozen=True)
class WitnessResult:
    kind: str
    field: object
    Q_value: float
    certified: bool
    parameter: float
    history: tuple = field(default_factory=tuple, repr=False)


def _inner_radius(sol, support):
    alpha = getattr(sol, "alpha", 0.0)
    return min(NEGLIGIBLE_WEIGHT ** (1.0 / (2.0 + 2.0 * alpha)), 1e-3 * support, 1e-7)


def _angular_rule(span):
    xi, wi = roots_legendre(ANGULAR_NODES)
    edges = np.linspace(0.0, span, ANGULAR_PANELS + 1)
    theta, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        theta.append(lo + half * (xi + 1.0))
        weights.append(half * wi)
    return np.concatenate(theta), np.concatenate(weights)


def quadratic_form_Q(sol, phi, domain=None, window=None):
    """
    Tensor-product Gauss quadrature of Q_v[phi, phi] in (log r, theta).

    Args:
        sol: PlaneSolution, HalfPlaneSolution or HeavyTailField
        phi: witness field with ``support``, ``breakpoints``, ``gradient``
        domain (str): 'plane' or 'halfplane' (default: the solution's domain)
        window (float): largest admissible support (default 4 x the support);
            only checked, the integral always runs over the support itself

    Raises:
        PreconditionError: when the support exceeds the window
    """
    domain = domain or sol.domain
    if domain not in (PLANE, HALFPLANE):
        raise PreconditionError(f"unknown domain '{domain}'")
    support = float(phi.support)
    window = WINDOW_FACTOR * support if window is None else float(window)
    if support > window:
        raise PreconditionError(f"witness support {support:g} exceeds the quadrature window {window:g}")

    r, wr = log_panels(_inner_radius(sol, support), support, breakpoints=phi.breakpoints)
    theta, wt = _angular_rule(math.pi if domain == HALFPLANE else 2.0 * math.pi)
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    weights = np.outer(wr * r, wt).ravel()
    points = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])

    values = phi(points)
    gradient = phi.gradient(points)
    integrand = np.sum(gradient ** 2, axis=1) - sol.weight(points) * values ** 2
    total = float(np.sum(weights * integrand))

    if domain == HALFPLANE:
        # both rays of the boundary line t = 0
        for sign in (1.0, -1.0):
            edge = np.column_stack([sign * r, np.zeros_like(r)])
            total -= float(np.sum(wr * sol.boundary_weight(edge[:, 0]) * phi(edge) ** 2))
    return total


def _search(sol, kind, build, start, cap):
    history = []
    parameter = start
    field_, value = None, float("nan")
    while parameter <= cap:
        field_ = build(parameter)
        value = quadratic_form_Q(sol, field_)
        history.append((parameter, value))
        logger.debug("%s witness at %g: Q = %.6g", kind, parameter, value)
        if value < 0:
            logger.info("%s witness certified at %g (Q = %.6g)", kind, parameter, value)
            return WitnessResult(kind, field_, value, True, parameter, tuple(history))
        parameter *= 2.0
    logger.warning("%s witness not certified up to %g", kind, cap)
    return WitnessResult(kind, field_, value, False, history[-1][0] if history else start, tuple(history))


def instability_witness(sol, kind, R0=2.0, M0=10.0, cap=SEARCH_CAP):
    """
    Search a witness of Morse instability by doubling its parameter.

    Args:
        sol: the limit solution
        kind (str): 'log_cap_R', 'annulus_M' or 'boundary_hz'
        R0 (float): first radius of the log cap searches
        M0 (float): inner radius of the annulus witness; M starts at 4 M0
        cap (float): largest parameter tried

    Returns:
        WitnessResult: the first certified witness, or the last one tried
            with ``certified = False``
    """
    if kind == LOG_CAP_R:
        if not R0 > 1:
            raise PreconditionError("R0 must exceed 1")
        return _search(sol, kind, LogCap, R0, cap)
    if kind == ANNULUS_M:
        if not M0 > 0:
            raise PreconditionError("M0 must be positive")
        return _search(sol, kind, lambda M: AnnulusCutoff(M0, M), 4.0 * M0, cap)
    if kind == BOUNDARY_HZ:
        if getattr(sol, "domain", None) != HALFPLANE or not sol.h0 < 0:
            raise PreconditionError("the boundary witness needs a half-plane solution with h0 < 0")
        return _search(sol, kind, lambda R: BoundaryHZ(R, sol.K0, sol.h0), R0, cap)
    raise PreconditionError(f"unknown witness kind '{kind}'")
