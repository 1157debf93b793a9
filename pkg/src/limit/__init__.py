"""
Limit problems on the plane and the half-plane and their instability witnesses.
"""
from .solutions import (HALFPLANE, PLANE, HalfPlaneSolution, HeavyTailField, LinearizedWitness, PlaneSolution,
                        halfplane_residual, halfplane_solution, plane_mass_exact, plane_residual, plane_solution,
                        plane_total_mass, z0, z0_residual)
from .witnesses import (ANNULUS_M, BOUNDARY_HZ, LOG_CAP_R, WITNESS_KINDS, AnnulusCutoff, BoundaryHZ, LogCap,
                        WitnessResult, instability_witness, quadratic_form_Q)

__all__ = ['HALFPLANE', 'PLANE', 'HalfPlaneSolution', 'HeavyTailField', 'LinearizedWitness', 'PlaneSolution',
           'halfplane_residual', 'halfplane_solution', 'plane_mass_exact', 'plane_residual', 'plane_solution',
           'plane_total_mass', 'z0', 'z0_residual', 'ANNULUS_M', 'BOUNDARY_HZ', 'LOG_CAP_R', 'WITNESS_KINDS',
           'AnnulusCutoff', 'BoundaryHZ', 'LogCap', 'WitnessResult', 'instability_witness', 'quadratic_form_Q']
