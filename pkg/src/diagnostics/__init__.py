"""
Gauss-Bonnet defect, existence hypotheses and scenario reports.
"""
from .checks import (CHI_NEGATIVE, CHI_POSITIVE_CRITICAL, CHI_POSITIVE_SUBCRITICAL, CHI_POSITIVE_SUPERCRITICAL,
                     CHI_ZERO_FIRST, CHI_ZERO_SECOND, CHI_ZERO_THIRD, FAILED, HCHI_EMPTY, LAMBDA_FAMILY, MINMAX,
                     HypothesisReport, ScenarioReport, classify_hypotheses, gauss_bonnet_residual)

__all__ = ['CHI_NEGATIVE', 'CHI_POSITIVE_CRITICAL', 'CHI_POSITIVE_SUBCRITICAL', 'CHI_POSITIVE_SUPERCRITICAL',
           'CHI_ZERO_FIRST', 'CHI_ZERO_SECOND', 'CHI_ZERO_THIRD', 'FAILED', 'HCHI_EMPTY', 'LAMBDA_FAMILY', 'MINMAX',
           'HypothesisReport', 'ScenarioReport', 'classify_hypotheses', 'gauss_bonnet_residual']
