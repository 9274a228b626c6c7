#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
experiment-rigidity: Hessian statistics of solutions on growing balls.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Sequence

from ..config import EXIT_INVARIANT, EXIT_OK, RIGIDITY_GROWTH, RIGIDITY_POINTS, RIGIDITY_RADII
from ..errors import ConfigError
from ..experiments.rigidity import decay_holds, rigidity_experiment
from ..jsonio import success
from ..solver.problem import read_config
from ..writer import write_csv
from .common import RunContext, print_table

logger = logging.getLogger(__name__)

RIGIDITY_KEYS = {"n", "radii", "epsilon", "gamma", "points"}

HEADER = ["R", "h", "deviation", "holder_proxy", "fit_residual", "newton_iter", "ok", "message"]


def cmd_experiment_rigidity(
    out_dir: Path,
    n: int = 3,
    radii: Sequence[float] = RIGIDITY_RADII,
    epsilon: float = 0.0,
    gamma: float = RIGIDITY_GROWTH,
    points: int = RIGIDITY_POINTS,
    as_json: bool = False,
) -> int:
    """Write rigidity.csv; exit 0 iff the decay check holds for the table."""
    run_config = {"n": n, "radii": list(radii), "epsilon": epsilon, "gamma": gamma, "points": points}
    run = RunContext(out_dir, "experiment-rigidity", run_config)

    rows = rigidity_experiment(n, radii, epsilon, points, gamma)
    failed = [row for row in rows if not row.ok]
    if failed:
        logger.warning("Partial rigidity table: %d of %d radii failed", len(failed), len(rows))
    holds = decay_holds(rows, epsilon)
    if not holds:
        logger.warning("Decay check failed for epsilon=%g", epsilon)

    write_csv(str(run.output("rigidity.csv")), HEADER,
              [[r.R, r.h, r.deviation, r.holder_proxy, r.fit_residual, r.newton_iter, r.ok, r.message]
               for r in rows])
    code = EXIT_OK if holds else EXIT_INVARIANT
    manifest_path = run.finish(code)

    if as_json:
        return success("experiment-rigidity", {
            "rows": [r.to_dict() for r in rows],
            "decay_holds": holds,
            "manifest": str(manifest_path),
        }, code=code)

    print_table([("R", 6), ("h", 8), ("deviation", 12), ("holder", 12), ("fit resid", 12), ("newton", 7),
                 ("ok", 4)],
                [[r.R, r.h, r.deviation, r.holder_proxy, r.fit_residual, r.newton_iter, r.ok] for r in rows])
    print(f"\nDecay check: {'holds' if holds else 'fails'}. Manifest: {manifest_path}")
    return code


def load_rigidity_config(path: str) -> Dict[str, Any]:
    """Experiment parameters from JSON (or from a previous run's manifest)."""
    data = read_config(path)
    unknown = set(data) - RIGIDITY_KEYS
    if unknown:
        raise ConfigError(f"unknown rigidity config keys: {sorted(unknown)}")
    return data
