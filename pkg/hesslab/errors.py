#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exception hierarchy. Every error carries the CLI exit code it maps to.
"""

from typing import Any, Dict, Optional

from .config import (
    EXIT_BARRIER, EXIT_CONFIG, EXIT_CORRUPT, EXIT_INVARIANT, EXIT_LINEAR, EXIT_SAMPLER,
)


class HesslabError(Exception):
    """Base class for all laboratory errors."""

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ArgumentError(HesslabError, ValueError):
    exit_code = EXIT_CONFIG


class ConfigError(HesslabError):
    exit_code = EXIT_CONFIG


class PreconditionError(HesslabError, ValueError):
    exit_code = EXIT_INVARIANT


class DegenerateGapError(PreconditionError):
    """The top eigenvalue cluster is not separated from the rest."""


class NumericalError(HesslabError):
    exit_code = EXIT_INVARIANT


class DiscretizationError(HesslabError):
    exit_code = EXIT_CONFIG


class SamplerError(HesslabError):
    exit_code = EXIT_SAMPLER


class SolverError(HesslabError):
    """Solver failure carrying the last iterate for post-mortem."""

    def __init__(self, message: str, state: Any = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.state = state


class AdmissibilityBarrierError(SolverError):
    exit_code = EXIT_BARRIER


class LinearSolveError(SolverError):
    exit_code = EXIT_LINEAR


class SnapshotError(HesslabError):
    exit_code = EXIT_CORRUPT


class OutputError(HesslabError):
    """A result file could not be written."""

    exit_code = EXIT_CONFIG
