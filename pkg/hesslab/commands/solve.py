#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
solve: Newton solve of a JSON problem config.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from ..config import EXIT_INVARIANT, EXIT_OK
from ..errors import AdmissibilityBarrierError, HesslabError, LinearSolveError
from ..jsonio import success
from ..models.solver import ProblemSpec, SolverState
from ..solver.exact import exact_reference
from ..solver.newton import newton_solve
from ..solver.problem import load_problem_config
from ..solver.snapshot import export_csv, write_snapshot
from ..utils.time import Stopwatch
from .common import RunContext

logger = logging.getLogger(__name__)


def exact_error(spec: ProblemSpec, state: SolverState) -> Optional[float]:
    """Max interior error against the closed-form solution, when one exists."""
    exact = exact_reference(spec)
    if exact is None:
        return None
    grid = spec.grid
    return float(np.max(np.abs(state.u.interior_values() - exact(grid.points(grid.interior_flat)))))


def _stem(config_path: str, points: int) -> str:
    name = Path(config_path).name
    for suffix in (".manifest.json", ".json"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    return f"{name}_g{points}"


def cmd_solve(
    out_dir: Path,
    config_path: str,
    grid_points: Optional[int] = None,
    as_json: bool = False,
) -> int:
    """Solve, then write <stem>.hess, <stem>.csv and the manifest.

    Solver failures are recorded in the manifest and re-raised so the CLI maps
    them to their exit codes.
    """
    spec, solver_config, normalized = load_problem_config(config_path, grid_points)
    grid = spec.grid
    run = RunContext(out_dir, "solve", {"problem": normalized}, seed=None)
    stem = _stem(config_path, grid.shape[0])
    logger.info("Solving %s: n=%d, %s grid %s, h=%.4g, %d unknowns",
                stem, grid.n, grid.domain, "x".join(map(str, grid.shape)), grid.h, grid.interior_count)

    try:
        with Stopwatch() as clock:
            state = newton_solve(spec, solver_config)
    except (AdmissibilityBarrierError, LinearSolveError) as e:
        if e.state is not None:
            write_snapshot(run.output(f"{stem}.failed.hess"), e.state.u)
        run.finish(e.exit_code)
        raise
    except HesslabError as e:
        run.finish(e.exit_code)
        raise

    snapshot = write_snapshot(run.output(f"{stem}.hess"), state.u)
    rows = export_csv(run.output(f"{stem}.csv"), state.u)
    error = exact_error(spec, state)
    code = EXIT_OK if state.converged else EXIT_INVARIANT
    manifest_path = run.finish(code)

    data: Dict[str, Any] = {
        "grid": grid.descriptor(),
        "converged": state.converged,
        "newton_iter": state.newton_iter,
        "residual_norm": state.residual_norm,
        "admissible_fraction": state.admissible_fraction,
        "exact_error": error,
        "seconds": clock.elapsed,
        "snapshot": str(snapshot),
        "csv_rows": rows,
        "manifest": str(manifest_path),
    }
    if as_json:
        data["history"] = state.history
        return success("solve", data, code=code)

    print(f"Converged:      {state.converged}")
    print(f"Newton steps:   {state.newton_iter}")
    print(f"Residual:       {state.residual_norm:.3e}")
    print(f"Admissible:     {state.admissible_fraction:.3%}")
    if error is not None:
        print(f"Error vs exact: {error:.3e}")
    print(f"Time:           {clock.elapsed:.2f}s")
    print(f"Snapshot:       {snapshot}")
    print(f"Manifest:       {manifest_path}")
    return code
