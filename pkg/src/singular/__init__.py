"""
Singular structures, desingularized curvatures and quantized values.
"""
from .structure import (CRITICAL, NONPOSITIVE, SUBCRITICAL, SUPERCRITICAL, SingularStructure,
                        classify_surface, gamma_distance, gamma_set, singular_chi, trudinger_tau)
from .curvature import CurvatureData, desingularize, hchi_nonempty, ratio_D, singular_weight

__all__ = ['CRITICAL', 'NONPOSITIVE', 'SUBCRITICAL', 'SUPERCRITICAL', 'SingularStructure',
           'classify_surface', 'gamma_distance', 'gamma_set', 'singular_chi', 'trudinger_tau',
           'CurvatureData', 'desingularize', 'hchi_nonempty', 'ratio_D', 'singular_weight']
