"""
Mean-field and direct energies, their derivatives and admissibility.
"""
from .mean_field import (PRINCIPAL, SECONDARY, FDerivatives, admissible, chi_to_lambda, f_bound_constant,
                         f_chi, f_derivatives, f_difference, has_secondary_root, normalization_C)
from .energy import (EnergyParams, EnergyState, dual_gradient_I, dual_gradient_J, energy_change_J, energy_I,
                     energy_J, gradient_I, gradient_J, hessian_form_I, hessian_form_J, masses)

__all__ = ['PRINCIPAL', 'SECONDARY', 'FDerivatives', 'admissible', 'chi_to_lambda', 'f_bound_constant',
           'f_chi', 'f_derivatives', 'f_difference', 'has_secondary_root', 'normalization_C', 'EnergyParams',
           'EnergyState', 'dual_gradient_I', 'dual_gradient_J', 'energy_change_J', 'energy_I', 'energy_J',
           'gradient_I', 'gradient_J', 'hessian_form_I', 'hessian_form_J', 'masses']
