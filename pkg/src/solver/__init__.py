"""
Energy minimization, symmetry restriction and parameter sweeps.
"""
from .symmetry import SymmetryGroup, group_average, rotation_group
from .minimizer import (CONVERGED, DIVERGING_ENERGY, ITERATION_CAP, LEFT_ADMISSIBLE, STATUSES, SolveReport,
                        SolverOptions, minimize, pde_residual, seed_state)
from .continuation import SweepPoint, is_energy_nondecreasing, lambda_sweep, solve_perturbed

__all__ = ['SymmetryGroup', 'group_average', 'rotation_group', 'CONVERGED', 'DIVERGING_ENERGY',
           'ITERATION_CAP', 'LEFT_ADMISSIBLE', 'STATUSES', 'SolveReport', 'SolverOptions', 'minimize',
           'pde_residual', 'seed_state', 'SweepPoint', 'is_energy_nondecreasing', 'lambda_sweep',
           'solve_perturbed']
