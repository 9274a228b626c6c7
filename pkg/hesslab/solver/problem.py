#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
JSON problem configs for the Dirichlet solver.

    {"n": 3,
     "domain": {"type": "ball", "radius": 1.0} | {"type": "box", "bounds": [[-1, 1], ...]},
     "grid_points": 33,
     "psi": {"kind": "constant", "params": {"c": 1.0}},
     "boundary": {"kind": "zero", "params": {}},
     "solver": {"tol": 1e-10, "max_iter": 50, "damping": 0.5}}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from ..config import SOLVER_DIMENSIONS
from ..errors import ConfigError
from ..models.solver import BoundarySpec, ProblemSpec, PsiSpec, SolverConfig
from .boundary import validate_boundary
from .grid import build_ball_grid, build_box_grid
from .psi import validate_psi

logger = logging.getLogger(__name__)

TOP_KEYS = {"n", "domain", "grid_points", "psi", "boundary", "solver"}
SOLVER_KEYS = {"tol", "max_iter", "max_halvings", "damping", "linear_rtol", "linear_max_iter", "initial_guess"}


def _section(data: Dict[str, Any], key: str, required: bool = True) -> Dict[str, Any]:
    value = data.get(key)
    if value is None:
        if required:
            raise ConfigError(f"problem config is missing '{key}'")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"'{key}' must be an object")
    return value


def read_config(source: Union[str, Path, Dict[str, Any]]) -> Dict[str, Any]:
    """Load a problem config; a run manifest with an embedded config is accepted too."""
    if isinstance(source, dict):
        return dict(source)
    path = Path(source)
    try:
        with path.open("r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}")
    if isinstance(data, dict) and "config_digest" in data and isinstance(data.get("config"), dict):
        logger.info("Replaying configuration embedded in manifest %s", path)
        data = data["config"]
        data = data.get("problem", data)
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def build_problem(data: Dict[str, Any], grid_points: Optional[int] = None) -> Tuple[ProblemSpec, SolverConfig]:
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown problem config keys: {sorted(unknown)}")
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("problem config needs an integer 'n'")
    if n not in SOLVER_DIMENSIONS:
        raise ConfigError(f"solver supports n in {SOLVER_DIMENSIONS}, got {n}")
    points = int(grid_points if grid_points is not None else data.get("grid_points", 17))

    domain = _section(data, "domain")
    kind = domain.get("type")
    if kind == "ball":
        if set(domain) - {"type", "radius"}:
            raise ConfigError(f"unknown ball keys: {sorted(set(domain) - {'type', 'radius'})}")
        grid = build_ball_grid(n, points, float(domain.get("radius", 1.0)))
    elif kind == "box":
        if set(domain) - {"type", "bounds"}:
            raise ConfigError(f"unknown box keys: {sorted(set(domain) - {'type', 'bounds'})}")
        grid = build_box_grid(n, points, domain.get("bounds"))
    else:
        raise ConfigError(f"domain type must be 'ball' or 'box', got {kind!r}")

    psi_cfg = _section(data, "psi")
    params = psi_cfg.get("params", {})
    if set(params) - {"c", "s"}:
        raise ConfigError(f"unknown psi params: {sorted(set(params) - {'c', 's'})}")
    psi = validate_psi(PsiSpec(kind=str(psi_cfg.get("kind", "constant")),
                               c=float(params.get("c", 1.0)), s=float(params.get("s", 0.0))))

    b_cfg = _section(data, "boundary", required=False)
    boundary = validate_boundary(BoundarySpec(kind=str(b_cfg.get("kind", "zero")),
                                              params=dict(b_cfg.get("params", {}))), n)

    s_cfg = _section(data, "solver", required=False)
    if set(s_cfg) - SOLVER_KEYS:
        raise ConfigError(f"unknown solver keys: {sorted(set(s_cfg) - SOLVER_KEYS)}")
    solver = SolverConfig(**s_cfg)
    if not solver.tol > 0 or solver.max_iter < 1 or not 0 < solver.damping < 1:
        raise ConfigError("solver needs tol > 0, max_iter >= 1 and 0 < damping < 1")
    if solver.initial_guess not in ("auto", "quadratic", "boundary"):
        raise ConfigError(f"unknown initial guess {solver.initial_guess!r}")

    return ProblemSpec(grid=grid, psi=psi, boundary=boundary, k=n - 1), solver


def load_problem_config(source: Union[str, Path, Dict[str, Any]],
                        grid_points: Optional[int] = None) -> Tuple[ProblemSpec, SolverConfig, Dict[str, Any]]:
    """Parse a config into (ProblemSpec, SolverConfig, normalized config dict)."""
    data = read_config(source)
    spec, solver = build_problem(data, grid_points)
    normalized = dict(data)
    normalized["grid_points"] = spec.grid.shape[0]
    return spec, solver, normalized
