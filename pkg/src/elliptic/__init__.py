"""
Finite element Neumann problems, Green functions and eigenpairs.
"""
from .operators import FEMOperators, assemble, recovered_gradient, triangle_gradients
from .factorization import NeumannSolver
from .context import EllipticContext, get_context
from .neumann import green_function, green_functions, neumann_load, solve_neumann
from .forms import SymmetricForm
from .eigen import smallest_eigenpairs

__all__ = ['FEMOperators', 'assemble', 'recovered_gradient', 'triangle_gradients', 'NeumannSolver',
           'EllipticContext', 'get_context', 'green_function', 'green_functions', 'neumann_load',
           'solve_neumann', 'SymmetricForm', 'smallest_eigenpairs']
