#!/usr/bin/env python
"""
Exception hierarchy shared by the liouville-lab packages.

Each class carries the process exit code the command-line front end uses
when the error reaches it.
"""


class LiouvilleError(Exception):
    """Base class for all errors raised by the lab."""

    exit_code = 1


class ConfigError(LiouvilleError):
    """Syntax or semantic error in a scenario configuration."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverFailure(LiouvilleError):
    """A linear, eigen or nonlinear solve did not deliver a result."""

    exit_code = 3


class PreconditionError(LiouvilleError):
    """An operation was called with inputs outside its domain."""

    exit_code = 4


class MeshError(PreconditionError):
    """Invalid or degenerate triangle mesh."""


class AdmissibilityError(PreconditionError):
    """A state (A, B) outside the admissible set of the mean-field energy."""


class CompatibilityError(PreconditionError):
    """Neumann data whose interior and boundary loads do not balance."""


class OutputError(LiouvilleError):
    """A result table or report could not be written."""

    exit_code = 5
