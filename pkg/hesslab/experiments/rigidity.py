#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Rigidity probe on growing balls.

For each radius R solve σ_{n-1}(∇²u) = 1 on B_R with boundary data equal to
the radial solution plus ε R^γ φ(x/R), φ(y) = e^{y₂} cos y₁, using a fixed
number of points per axis. The rescaled field v(y) = (u(Ry) − sup g)/R² lives
on the unit ball and has ∇²v(y) = ∇²u(Ry); its Hessian oscillation should
flatten as R grows.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from .. import config
from ..config import HOLDER_MAX_POINTS, RIGIDITY_GROWTH, RIGIDITY_POINTS, RIGIDITY_RADII
from ..errors import ArgumentError, HesslabError
from ..models.experiment import RigidityRow
from ..models.solver import BoundarySpec, ProblemSpec, PsiSpec, SolverConfig
from ..solver.grid import build_ball_grid, nearest_index
from ..solver.newton import newton_solve
from ..solver.operator import hessians
from ..solver.boundary import sup_boundary
from .fit import fit_quadratic

logger = logging.getLogger(__name__)

SEPARATION = 0.25  # minimum pair distance on the unit ball for the Hölder quotient
DECAY_SLACK = 1e-9


def rigidity_problem(n: int, R: float, epsilon: float, points: int = RIGIDITY_POINTS,
                     gamma: float = RIGIDITY_GROWTH) -> ProblemSpec:
    grid = build_ball_grid(n, points, R)
    boundary = BoundarySpec(kind="rigidity", params={"epsilon": epsilon, "R": R, "gamma": gamma})
    return ProblemSpec(grid=grid, psi=PsiSpec(kind="constant", c=1.0), boundary=boundary, k=n - 1)


def holder_proxy(y: np.ndarray, mats: np.ndarray, separation: float = SEPARATION,
                 max_points: int = HOLDER_MAX_POINTS) -> float:
    """max ‖H(y) − H(y')‖_F / |y − y'| over pairs at distance >= separation."""
    if y.shape[0] > max_points:
        keep = np.linspace(0, y.shape[0] - 1, max_points).round().astype(int)
        y, mats = y[keep], mats[keep]
    flat = mats.reshape(mats.shape[0], -1)
    best = 0.0
    for i in range(y.shape[0] - 1):
        dist = np.linalg.norm(y[i + 1:] - y[i], axis=1)
        far = dist >= separation
        if not np.any(far):
            continue
        diff = np.linalg.norm(flat[i + 1:][far] - flat[i], axis=1)
        best = max(best, float(np.max(diff / dist[far])))
    return best


def rigidity_row(n: int, R: float, epsilon: float, points: int = RIGIDITY_POINTS,
                 gamma: float = RIGIDITY_GROWTH, solver: Optional[SolverConfig] = None) -> RigidityRow:
    """Solve on B_R and collect Hessian statistics of the rescaled field."""
    spec = rigidity_problem(n, R, epsilon, points, gamma)
    grid = spec.grid
    try:
        state = newton_solve(spec, solver or SolverConfig())
    except HesslabError as e:
        logger.warning("Rigidity solve failed at R=%g: %s", R, e)
        return RigidityRow(R=R, h=grid.h, hessian_center=(), deviation=float("nan"), holder_proxy=float("nan"),
                           fit_residual=float("nan"), newton_iter=-1, ok=False, message=str(e))

    u = state.u
    mats = hessians(u)
    y = grid.points(grid.interior_flat) / R
    v = (u.interior_values() - sup_boundary(spec.boundary, grid, spec.psi)) / R ** 2

    inner = np.linalg.norm(y, axis=1) <= 0.5
    mean = mats[inner].mean(axis=0)
    deviation = float(np.max(np.linalg.norm(mats[inner] - mean, axis=(1, 2))))
    center_flat = np.ravel_multi_index(nearest_index(grid, np.zeros(n)), grid.shape)
    center = mats[int(np.searchsorted(grid.interior_flat, center_flat))]

    return RigidityRow(
        R=float(R), h=grid.h,
        hessian_center=tuple(tuple(float(v) for v in row) for row in center),
        deviation=deviation,
        holder_proxy=holder_proxy(y[inner], mats[inner]),
        fit_residual=fit_quadratic(y, v).max_residual,
        newton_iter=state.newton_iter,
        ok=state.converged,
        message="" if state.converged else f"not converged (residual {state.residual_norm:.3e})",
    )


def rigidity_experiment(n: int = 3, radii: Sequence[float] = RIGIDITY_RADII, epsilon: float = 0.0,
                        points: int = RIGIDITY_POINTS, gamma: float = RIGIDITY_GROWTH,
                        threads: Optional[int] = None, progress: Optional[bool] = None) -> List[RigidityRow]:
    """Rows for each radius, ordered by R; failed solves become marked rows."""
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ArgumentError(f"radii must be positive, got {radii}")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ArgumentError(f"radii must be increasing, got {radii}")
    threads = threads or config.THREADS
    progress = config.SHOW_PROGRESS if progress is None else progress
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda R: rigidity_row(n, R, epsilon, points, gamma), radii)
        rows = list(tqdm(results, total=len(radii), desc="radii", unit="R", disable=not progress))
    return sorted(rows, key=lambda row: row.R)


def _nonincreasing(values: Sequence[float]) -> bool:
    return all(b <= a * (1.0 + DECAY_SLACK) + DECAY_SLACK for a, b in zip(values, values[1:]))


def decay_holds(rows: Sequence[RigidityRow], epsilon: float) -> bool:
    """ε = 0: every fit residual <= 10 h_y²; ε > 0: Hölder proxy and fit residual nonincreasing in R."""
    good = [row for row in rows if row.ok]
    if len(good) != len(rows) or not good:
        return False
    if epsilon == 0.0:
        return all(row.fit_residual <= 10.0 * (row.h / row.R) ** 2 for row in good)
    return all(_nonincreasing([getattr(row, column) for row in good]) for column in ("holder_proxy", "fit_residual"))
