"""
Scenario configuration for liouville-lab.
"""
from .curvature_family import CurvatureFamily, parse_family
from .scenario_config import (CurvatureConfig, RunConfig, ScenarioConfig, SingularitiesConfig, SolverConfig,
                              SurfaceConfig, config_hash, emit_config, parse_config, parse_config_text)

__all__ = ['CurvatureFamily', 'parse_family', 'CurvatureConfig', 'RunConfig', 'ScenarioConfig',
           'SingularitiesConfig', 'SolverConfig', 'SurfaceConfig', 'config_hash', 'emit_config', 'parse_config',
           'parse_config_text']
