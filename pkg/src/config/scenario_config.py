#!/usr/bin/env python
"""
Scenario configuration files.

INI-style sections [surface] [singularities] [curvature] [solver] [run] with
``key = value`` lines and ``#`` comments. Unknown sections and keys are
rejected; emitting a parsed configuration and parsing it again gives the same
configuration.
"""
import configparser
import hashlib
import logging
import math
import os
from dataclasses import dataclass, field, fields, replace

import numpy as np

from config.curvature_family import parse_family
from errors import ConfigError

logger = logging.getLogger(__name__)

SURFACE_KINDS = ("disc", "annulus", "multihole", "mesh")
SEED_KINDS = ("zero", "bubble", "boundary_layer")
PROBE_KINDS = ("interior", "boundary", "combined", "local")
MU_RANGE = (0.9, 1.1)


# ----------------------------------------------------------------------
# value codecs


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text} is not finite")
    return value


def _int(text):
    return int(text)


def _bool(text):
    states = configparser.ConfigParser.BOOLEAN_STATES
    if text.lower() not in states:
        raise ValueError(f"{text} is not a boolean")
    return states[text.lower()]


def _triples(text):
    """'x:y:v;x:y:v' -> ((x, y, v), ...)"""
    items = [item.strip() for item in text.split(";") if item.strip()]
    triples = []
    for item in items:
        parts = item.split(":")
        if len(parts) != 3:
            raise ValueError(f"'{item}' is not of the form x:y:value")
        triples.append(tuple(_float(p) for p in parts))
    return tuple(triples)


def _point(text):
    parts = text.replace(":", ",").split(",")
    if len(parts) != 2:
        raise ValueError(f"'{text}' is not a point x,y")
    return tuple(_float(p) for p in parts)


def _floats(text):
    return tuple(_float(p) for p in text.split(",") if p.strip())


def _grid(text):
    """'start:stop:count' or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"'{text}' is not start:stop:count")
        start, stop, count = _float(parts[0]), _float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("a grid needs at least one point")
        return tuple(float(v) for v in np.linspace(start, stop, count))
    return _floats(text)


def _emit_float(value):
    return repr(float(value))


def _emit_triples(value):
    return ";".join(":".join(_emit_float(v) for v in triple) for triple in value)


def _emit_floats(value):
    return ",".join(_emit_float(v) for v in value)


def _emit_point(value):
    return ",".join(_emit_float(v) for v in value)


def _emit_bool(value):
    return "true" if value else "false"


def _option(default, parse, emit=str, **kwargs):
    return field(default=default, metadata={"parse": parse, "emit": emit}, **kwargs)


FLOAT = (_float, _emit_float)
INT = (_int, str)
BOOL = (_bool, _emit_bool)
STR = (str.strip, str)


# ----------------------------------------------------------------------
# sections


@dataclass(frozen=True)
class SurfaceConfig:
    kind: str = _option("disc", *STR)
    radius: float = _option(1.0, *FLOAT)
    r_in: float = _option(0.5, *FLOAT)
    r_out: float = _option(1.0, *FLOAT)
    holes: tuple = _option((), _triples, _emit_triples)
    refinement: int = _option(2, *INT)
    grading_rings: int = _option(3, *INT)
    grading_ratio: float = _option(0.5, *FLOAT)
    grading_min_radius: float = _option(None, *FLOAT)
    mesh_file: str = _option(None, *STR)
    symmetry_order: int = _option(None, *INT)


@dataclass(frozen=True)
class SingularitiesConfig:
    interior: tuple = _option((), _triples, _emit_triples)
    corners: tuple = _option((), _triples, _emit_triples)


@dataclass(frozen=True)
class CurvatureConfig:
    K: str = _option("constant:1.0", *STR)
    h: str = _option("constant:0.0", *STR)


@dataclass(frozen=True)
class SolverConfig:
    tol_grad: float = _option(1e-8, *FLOAT)
    tol_pde: float = _option(1e-6, *FLOAT)
    max_iter: int = _option(2000, *INT)
    step0: float = _option(1.0, *FLOAT)
    armijo_c: float = _option(1e-4, *FLOAT)
    divergence_floor: float = _option(None, *FLOAT)
    lambda_max: float = _option(1e6, *FLOAT)
    symmetry_order: int = _option(None, *INT)
    tol_eig: float = _option(1e-8, *FLOAT)
    index_cap: int = _option(20, *INT)
    seed_kind: str = _option("zero", *STR)
    seed_lambda: float = _option(100.0, *FLOAT)
    seed_point: tuple = _option(None, _point, _emit_point)


@dataclass(frozen=True)
class RunConfig:
    lam: float = _option(None, *FLOAT)
    lambda_grid: tuple = _option((), _grid, _emit_floats)
    mu_list: tuple = _option((1.0,), _floats, _emit_floats)
    warm_start: bool = _option(True, *BOOL)
    bubble_lambdas: tuple = _option((1e2, 3e2, 1e3, 3e3, 1e4), _floats, _emit_floats)
    bubble_point: tuple = _option(None, _point, _emit_point)
    probe: str = _option("boundary", *STR)
    limit_K0: float = _option(1.0, *FLOAT)
    limit_alpha: float = _option(0.0, *FLOAT)
    limit_h0: float = _option(-1.0, *FLOAT)
    concentration_radius: float = _option(0.1, *FLOAT)
    seed: int = _option(0, *INT)
    output_dir: str = _option("output", *STR)


# config key of RunConfig.lam
KEY_ALIASES = {"lambda": "lam"}
EMIT_ALIASES = {v: k for k, v in KEY_ALIASES.items()}


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario: surface, singularities, curvatures, solver and run options."""

    surface: SurfaceConfig = field(default_factory=SurfaceConfig)
    singularities: SingularitiesConfig = field(default_factory=SingularitiesConfig)
    curvature: CurvatureConfig = field(default_factory=CurvatureConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    run: RunConfig = field(default_factory=RunConfig)
    base_dir: str = field(default=".", compare=False)

    @property
    def K_family(self):
        return parse_family(self.curvature.K, self.base_dir)

    @property
    def h_family(self):
        return parse_family(self.curvature.h, self.base_dir)


SECTIONS = {
    "surface": SurfaceConfig,
    "singularities": SingularitiesConfig,
    "curvature": CurvatureConfig,
    "solver": SolverConfig,
    "run": RunConfig,
}


# ----------------------------------------------------------------------
# parsing


def _locate(lines, section, key=None):
    """1-based line of a section header or of a key inside it."""
    current = None
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if key is None and current == section:
                return number
            continue
        if current == section and key is not None:
            name = line.split("=", 1)[0].strip()
            if name == key and "=" in line:
                return number
    return None


def _read(text, source):
    parser = configparser.ConfigParser(strict=True, interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), empty_lines_in_values=False,
                                       default_section="__defaults__")
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"duplicate key '{e.option}' in [{e.section}]", e.lineno)
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"duplicate section [{e.section}]", e.lineno)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key outside of any section", e.lineno)
    except configparser.ParsingError as e:
        lineno, line = e.errors[0]
        raise ConfigError(f"cannot parse {line.strip()}", lineno)
    return parser


def _section(cls, name, items, lines, base_dir):
    known = {f.name: f for f in fields(cls)}
    values = {}
    for key, raw in items:
        attribute = KEY_ALIASES.get(key, key) if cls is RunConfig else key
        line = _locate(lines, name, key)
        if attribute not in known or (cls is RunConfig and key in EMIT_ALIASES):
            raise ConfigError(f"unknown key '{key}' in [{name}]", line)
        option = known[attribute]
        if raw.strip() == "":
            raise ConfigError(f"empty value for '{key}' in [{name}]", line)
        try:
            values[attribute] = option.metadata["parse"](raw.strip())
        except ValueError as e:
            raise ConfigError(f"invalid value for '{key}' in [{name}]: {e}", line)
    return cls(**values)


def _resolve(path, base_dir):
    return path if os.path.isabs(path) else os.path.abspath(os.path.join(base_dir, path))


def _validate(config, lines):
    def fail(message, section, key):
        raise ConfigError(message, _locate(lines, section, EMIT_ALIASES.get(key, key)))

    surface = config.surface
    if surface.kind not in SURFACE_KINDS:
        fail(f"surface kind must be one of {', '.join(SURFACE_KINDS)}", "surface", "kind")
    if surface.kind == "mesh":
        if surface.mesh_file is None:
            fail("a mesh surface needs mesh_file", "surface", "kind")
        if not os.path.isfile(surface.mesh_file):
            fail(f"mesh file {surface.mesh_file} does not exist", "surface", "mesh_file")
    if surface.radius <= 0:
        fail("radius must be positive", "surface", "radius")
    if not 0 < surface.r_in < surface.r_out:
        fail("annulus radii must satisfy 0 < r_in < r_out", "surface", "r_in")
    if any(r <= 0 for _, _, r in surface.holes):
        fail("hole radii must be positive", "surface", "holes")
    if surface.refinement < 0:
        fail("refinement must be non-negative", "surface", "refinement")
    if not 0 < surface.grading_ratio < 1:
        fail("grading_ratio must lie in (0, 1)", "surface", "grading_ratio")
    if surface.symmetry_order is not None and surface.symmetry_order < 2:
        fail("symmetry_order must be at least 2", "surface", "symmetry_order")

    for _, _, alpha in config.singularities.interior:
        if not alpha > -1:
            fail(f"cone order {alpha} violates the constraint alpha > -1", "singularities", "interior")
    for _, _, beta in config.singularities.corners:
        if not beta > -1:
            fail(f"corner order {beta} violates the constraint beta > -1", "singularities", "corners")

    solver = config.solver
    for key in ("tol_grad", "tol_pde", "step0", "lambda_max", "tol_eig", "seed_lambda"):
        if not getattr(solver, key) > 0:
            fail(f"{key} must be positive", "solver", key)
    if not 0 < solver.armijo_c < 1:
        fail("armijo_c must lie in (0, 1)", "solver", "armijo_c")
    if solver.max_iter < 1 or solver.index_cap < 1:
        fail("max_iter and index_cap must be positive", "solver", "max_iter")
    if solver.symmetry_order is not None and solver.symmetry_order < 2:
        fail("symmetry_order must be at least 2", "solver", "symmetry_order")
    if solver.seed_kind not in SEED_KINDS:
        fail(f"seed_kind must be one of {', '.join(SEED_KINDS)}", "solver", "seed_kind")
    if solver.seed_kind == "bubble" and solver.seed_point is None:
        fail("a bubble seed needs seed_point", "solver", "seed_kind")

    run = config.run
    low, high = MU_RANGE
    if any(not low <= mu <= high for mu in run.mu_list):
        fail(f"mu values must lie in [{low}, {high}]", "run", "mu_list")
    if not run.mu_list:
        fail("mu_list must not be empty", "run", "mu_list")
    if len(run.bubble_lambdas) < 2 or any(L <= 0 for L in run.bubble_lambdas):
        fail("bubble_lambdas needs at least two positive values", "run", "bubble_lambdas")
    if run.probe not in PROBE_KINDS:
        fail(f"probe must be one of {', '.join(PROBE_KINDS)}", "run", "probe")
    if not run.limit_K0 > 0:
        fail("limit_K0 must be positive", "run", "limit_K0")
    if not run.limit_alpha > -1:
        fail("limit_alpha violates the constraint alpha > -1", "run", "limit_alpha")
    if not run.concentration_radius > 0:
        fail("concentration_radius must be positive", "run", "concentration_radius")
    if run.seed < 0:
        fail("seed must be a non-negative integer", "run", "seed")


def parse_config_text(text, base_dir=".", source="<config>"):
    """
    Parse and validate configuration text.

    Raises:
        ConfigError: on syntax errors (with line numbers), unknown sections or
            keys, and semantic errors
    """
    lines = text.splitlines()
    parser = _read(text, source)
    for name in parser.sections():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]", _locate(lines, name))
    sections = {name: _section(cls, name, parser.items(name) if parser.has_section(name) else [], lines, base_dir)
                for name, cls in SECTIONS.items()}

    surface = sections["surface"]
    if surface.mesh_file is not None:
        sections["surface"] = replace(surface, mesh_file=_resolve(surface.mesh_file, base_dir))
    curvature = sections["curvature"]
    # canonical family text; table paths become absolute
    sections["curvature"] = CurvatureConfig(
        *(str(parse_family(getattr(curvature, key), base_dir, _locate(lines, "curvature", key)))
          for key in ("K", "h")))
    config = ScenarioConfig(base_dir=os.path.abspath(base_dir), **sections)
    _validate(config, lines)
    return config


def parse_config(path):
    """
    Read and validate a scenario file.

    Returns:
        ScenarioConfig: the configuration with defaults filled in

    Raises:
        ConfigError: when the file is unreadable or invalid
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}")
    config = parse_config_text(text, base_dir=os.path.dirname(os.path.abspath(path)), source=str(path))
    logger.info("parsed scenario %s", path)
    return config


def emit_config(config):
    """Canonical text of a configuration; every option is written, unset ones omitted."""
    out = []
    for name in SECTIONS:
        section = getattr(config, name)
        out.append(f"[{name}]")
        for f in fields(section):
            value = getattr(section, f.name)
            if value is None or value == ():
                continue
            key = EMIT_ALIASES.get(f.name, f.name) if name == "run" else f.name
            out.append(f"{key} = {f.metadata['emit'](value)}")
        out.append("")
    return "\n".join(out)


def config_hash(config):
    """sha256 of the canonical text."""
    return hashlib.sha256(emit_config(config).encode("utf-8")).hexdigest()
