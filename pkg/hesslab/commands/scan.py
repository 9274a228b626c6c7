#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
scan-pogorelov: (−u)^β λ₁ over a solved field, with an optional
grid-refinement study from a problem config.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..concavity.inequality import default_delta0
from ..config import BETA_SWEEP, EXIT_OK
from ..errors import ConfigError
from ..experiments.pogorelov import beta_threshold, pogorelov_scan, refinement_change, test_function_field
from ..jsonio import success
from ..models.experiment import PogorelovScan
from ..models.solver import ScalarField
from ..solver.newton import newton_solve
from ..solver.problem import load_problem_config
from ..solver.snapshot import read_snapshot
from ..writer import write_csv
from .common import RunContext, print_table

logger = logging.getLogger(__name__)


def _scan_rows(scans: Sequence[PogorelovScan], points: int) -> List[list]:
    return [[points, s.beta, s.sup_value] + list(s.argmax) + [s.argmax_interior, s.localization_weight]
            for s in scans]


def scan_field(u: ScalarField, betas: Sequence[float], B: float, variant: str = "gradient") -> List[Dict[str, Any]]:
    """Scan plus test-function maximum for every β."""
    out = []
    for beta in betas:
        scan = pogorelov_scan(u, beta)
        test = test_function_field(u, beta, B, variant)
        out.append({"scan": scan, "test_max": test.max_value, "test_argmax_interior": test.argmax_interior})
    return out


def refine_study(config_path: str, grid_points: Sequence[int], betas: Sequence[float]) -> Dict[str, Any]:
    """Solve the config at each grid size and compare suprema between the two finest."""
    sups: Dict[float, Dict[int, float]] = {float(b): {} for b in betas}
    scans: Dict[int, List[PogorelovScan]] = {}
    for points in sorted(grid_points):
        spec, solver_config, _ = load_problem_config(config_path, points)
        state = newton_solve(spec, solver_config)
        logger.info("Refinement grid %d: %d Newton steps, residual %.3e", points, state.newton_iter,
                    state.residual_norm)
        scans[points] = [pogorelov_scan(state.u, beta) for beta in betas]
        for scan in scans[points]:
            sups[scan.beta][points] = scan.sup_value
    changes = {beta: refinement_change(by_grid) for beta, by_grid in sups.items()}
    return {"sups": sups, "changes": changes, "scans": scans}


def cmd_scan_pogorelov(
    out_dir: Path,
    solution_path: Optional[str],
    betas: Sequence[float] = BETA_SWEEP,
    B: float = 0.0,
    variant: str = "gradient",
    refine_config: Optional[str] = None,
    refine_points: Sequence[int] = (),
    as_json: bool = False,
) -> int:
    """Scan a snapshot and/or run a refinement study; writes pogorelov_scan.csv."""
    if not solution_path and not refine_config:
        raise ConfigError("scan-pogorelov needs --solution, --refine or both")
    if refine_config and len(refine_points) < 2:
        raise ConfigError("a refinement study needs at least two grid sizes")
    run_config = {"solution": solution_path, "betas": list(betas), "B": B, "variant": variant,
                  "refine_config": refine_config, "refine_points": list(refine_points)}
    run = RunContext(out_dir, "scan-pogorelov", run_config)
    data: Dict[str, Any] = {}
    rows: List[list] = []
    n: Optional[int] = None

    if solution_path:
        u = read_snapshot(solution_path)
        n = u.grid.n
        results = scan_field(u, betas, B, variant)
        scans = [r["scan"] for r in results]
        rows.extend(_scan_rows(scans, u.grid.shape[0]))
        data["scans"] = [dict(r["scan"].to_dict(), test_max=r["test_max"],
                              test_argmax_interior=r["test_argmax_interior"]) for r in results]

    if refine_config:
        study = refine_study(refine_config, refine_points, betas)
        for points, scans in study["scans"].items():
            rows.extend(_scan_rows(scans, points))
            n = scans[0].grid["n"] if scans else n
        data["refinement"] = {"sups": {str(b): {str(p): v for p, v in d.items()} for b, d in study["sups"].items()},
                              "relative_change": {str(b): c for b, c in study["changes"].items()}}

    if n is not None:
        data["beta_threshold"] = beta_threshold(n, default_delta0(n))
        width = n
        header = (["grid_points", "beta", "sup_value"] + [f"x_{i + 1}" for i in range(width)]
                  + ["argmax_interior", "localization_weight"])
        write_csv(str(run.output("pogorelov_scan.csv")), header, rows)
    manifest_path = run.finish(EXIT_OK)
    data["manifest"] = str(manifest_path)

    if as_json:
        return success("scan-pogorelov", data)

    print_table([("grid", 5), ("beta", 6), ("sup", 12), ("interior", 9), ("loc weight", 12)],
                [[r[0], r[1], r[2], r[-2], r[-1]] for r in rows])
    if "beta_threshold" in data:
        print(f"\nMinimum admissible beta: {data['beta_threshold']:.4g}")
    for beta, change in data.get("refinement", {}).get("relative_change", {}).items():
        print(f"beta={beta}: relative change between finest grids {change}")
    print(f"Manifest: {manifest_path}")
    return EXIT_OK
