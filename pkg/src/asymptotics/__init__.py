"""
Bubbles, concentration, Pohozaev and Morse diagnostics, Trudinger-Moser probes.
"""
from .bubbles import (Barycenter, BubbleSlopes, boundary_barycenter, bubble, bubble_slopes, energy_slope,
                      raw_bubble, resolved_lambdas, test_function_energy)
from .concentration import ConcentrationReport, concentration_points, local_mass
from .pohozaev import pohozaev_residual
from .morse import DIRECT, MEAN_FIELD, MorseIndex, direct_field, morse_index
from .trudinger import BubbleFamily, ProbeReport, probe_constant, tm_probe, tm_probe_fields

__all__ = ['Barycenter', 'BubbleSlopes', 'boundary_barycenter', 'bubble', 'bubble_slopes', 'energy_slope',
           'raw_bubble', 'resolved_lambdas', 'test_function_energy', 'ConcentrationReport',
           'concentration_points', 'local_mass', 'pohozaev_residual', 'DIRECT', 'MEAN_FIELD', 'MorseIndex',
           'direct_field', 'morse_index', 'BubbleFamily', 'ProbeReport', 'probe_constant', 'tm_probe',
           'tm_probe_fields']
